pub mod measure;
pub mod sweep;
pub mod threshold;
pub mod verify;
