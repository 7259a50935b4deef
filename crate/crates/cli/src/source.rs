//! Turning `--state`, `--family/--p` and `--file` into a state.

use std::path::Path;

use minlab::qcore::{CMatrix, DensityOperator, DimensionProfile, PureState};
use minlab::states::{self, family, Family, FamilySpec};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A parsed input state; `pure` is kept when available so pure-state formulas apply.
pub struct StateInput {
    pub label: String,
    pub rho: DensityOperator<f64>,
    pub pure: Option<PureState<f64>>,
}

impl StateInput {
    fn from_pure(label: String, psi: PureState<f64>) -> Self {
        StateInput { label, rho: psi.density(), pure: Some(psi) }
    }
}

pub fn named(name: &str) -> CliResult<StateInput> {
    let key = name.to_ascii_lowercase();
    let psi = match key.as_str() {
        "bell" => states::bell(),
        "w" | "w3" => states::w3(),
        "w3-flipped" | "wt" => states::w3_flipped(),
        "ghz-minus" | "ghzminus" => states::ghz_minus(),
        "ghz1" | "ghz-1" => states::ghz_1(),
        _ => match key.strip_prefix("ghz").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) => states::ghz(n).map_err(CliError::usage)?,
            None => {
                return Err(CliError::Usage(format!(
                    "unknown state '{name}' (expected bell, ghzN, w3, w3-flipped, ghz-minus, ghz1)"
                )))
            }
        },
    };
    Ok(StateInput::from_pure(key, psi))
}

pub fn from_family(name: &str, p: f64) -> CliResult<StateInput> {
    let fam: Family = name.parse().map_err(CliError::Usage)?;
    let spec = FamilySpec::new(fam, p).map_err(CliError::usage)?;
    Ok(StateInput { label: format!("{fam}(p={p})"), rho: family(&spec), pure: None })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

/// On-disk state: complex numbers are `[re, im]` pairs, matrices are row-major lists of rows.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[cfg(test)]
impl StateFile {
    pub fn from_pure(psi: &PureState<f64>) -> Self {
        StateFile {
            dims: psi.profile().dims().to_vec(),
            kind: StateKind::Pure,
            amplitudes: Some(psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            matrix: None,
        }
    }

    pub fn from_density(rho: &DensityOperator<f64>) -> Self {
        let m = rho.matrix();
        let rows = (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        StateFile { dims: rho.profile().dims().to_vec(), kind: StateKind::Mixed, amplitudes: None, matrix: Some(rows) }
    }
}

impl StateFile {
    pub fn into_input(self, label: String) -> CliResult<StateInput> {
        let profile = DimensionProfile::new(self.dims).map_err(CliError::usage)?;
        let n = profile.total();
        let to_c = |p: [f64; 2]| Complex::new(p[0], p[1]);
        match self.kind {
            StateKind::Pure => {
                if self.matrix.is_some() {
                    return Err(CliError::Usage("pure state file must not contain 'matrix'".into()));
                }
                let amps =
                    self.amplitudes.ok_or_else(|| CliError::Usage("pure state file needs 'amplitudes'".into()))?;
                if amps.len() != n {
                    return Err(CliError::Usage(format!("expected {n} amplitudes, found {}", amps.len())));
                }
                let psi = PureState::new(amps.into_iter().map(to_c).collect(), profile).map_err(CliError::usage)?;
                Ok(StateInput::from_pure(label, psi))
            }
            StateKind::Mixed => {
                if self.amplitudes.is_some() {
                    return Err(CliError::Usage("mixed state file must not contain 'amplitudes'".into()));
                }
                let rows = self.matrix.ok_or_else(|| CliError::Usage("mixed state file needs 'matrix'".into()))?;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Usage(format!("matrix must be {n} x {n}")));
                }
                let data = rows.into_iter().flatten().map(to_c).collect();
                let m = CMatrix::from_vec(n, n, data).map_err(CliError::usage)?;
                let rho = DensityOperator::new(m, profile).map_err(CliError::usage)?;
                Ok(StateInput { label, rho, pure: None })
            }
        }
    }
}

pub fn from_file(path: &Path) -> CliResult<StateInput> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: StateFile =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    file.into_input(path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states_resolve() {
        assert_eq!(named("ghz4").unwrap().rho.profile().parties(), 4);
        assert_eq!(named("W3").unwrap().label, "w3");
        assert!(named("ghz1").unwrap().pure.is_some());
        assert!(matches!(named("ghz0"), Err(CliError::Usage(_))));
        assert!(matches!(named("nope"), Err(CliError::Usage(_))));
    }

    #[test]
    fn families_validate_p() {
        assert!(from_family("ghz-w", 0.3).is_ok());
        assert!(matches!(from_family("ghz-w", 1.3), Err(CliError::Usage(_))));
        assert!(matches!(from_family("xyz", 0.3), Err(CliError::Usage(_))));
    }

    #[test]
    fn state_files_roundtrip() {
        let psi = states::w3::<f64>();
        let json = serde_json::to_string(&StateFile::from_pure(&psi)).unwrap();
        let back = serde_json::from_str::<StateFile>(&json).unwrap().into_input("w".into()).unwrap();
        assert_eq!(back.pure.unwrap().amplitudes(), psi.amplitudes());

        let rho = from_family("wt-w", 0.4).unwrap().rho;
        let json = serde_json::to_string(&StateFile::from_density(&rho)).unwrap();
        let back = serde_json::from_str::<StateFile>(&json).unwrap().into_input("m".into()).unwrap();
        assert!(back.rho.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn malformed_files_are_usage_errors() {
        let cases = [
            r#"{"dims":[2,2],"kind":"pure","amplitudes":[[1,0],[0,0],[0,0]]}"#,
            r#"{"dims":[2,2],"kind":"pure","amplitudes":[[1,0],[0,0],[0,0],[1,0]]}"#,
            r#"{"dims":[2],"kind":"mixed","matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#,
            r#"{"dims":[2],"kind":"mixed","matrix":[[[1,0],[1,0]],[[0,0],[0,0]]]}"#,
            r#"{"dims":[2],"kind":"mixed"}"#,
            r#"{"dims":[1],"kind":"pure","amplitudes":[[1,0]]}"#,
        ];
        for c in cases {
            let parsed: StateFile = serde_json::from_str(c).unwrap();
            assert!(matches!(parsed.into_input("x".into()), Err(CliError::Usage(_))), "{c}");
        }
        assert!(serde_json::from_str::<StateFile>(r#"{"dims":[2],"kind":"thermal"}"#).is_err());
    }
}
