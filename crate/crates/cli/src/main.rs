mod commands;
mod error;
mod format;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use minlab::oracle::SearchConfig;
use minlab::states::Family;

use commands::sweep::Grid;
use commands::{measure, sweep, threshold, verify};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "minlab", version, about = "Measurement-induced nonlocality and geometric discord")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// N_l and D_l of one state, with the K spectrum and the equality verdict.
    Measure(MeasureArgs),
    /// Closed-form N and D along an example family, as CSV or JSON.
    Sweep(SweepArgs),
    /// Boundaries of the Case I equality region along a family.
    Threshold(ThresholdArgs),
    /// Closed forms against the search oracle on random states.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// Seed for the oracle search.
    #[arg(long, env = "MINLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Coarse samples per oracle restart.
    #[arg(long, default_value_t = SearchConfig::default().grid_points)]
    grid_points: usize,
    /// Oracle refinement restarts.
    #[arg(long, default_value_t = SearchConfig::default().restarts)]
    restarts: usize,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            grid_points: self.grid_points,
            restarts: self.restarts,
            seed: self.seed,
            ..SearchConfig::default()
        }
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["state", "family", "file"])))]
struct MeasureArgs {
    /// Named state: bell, ghzN, w3, w3-flipped, ghz-minus, ghz1.
    #[arg(long)]
    state: Option<String>,
    /// Example family; requires --p.
    #[arg(long, requires = "p")]
    family: Option<String>,
    /// Mixing weight for --family.
    #[arg(long)]
    p: Option<f64>,
    /// JSON state file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Measured subsystem, 1-based.
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    family: Family,
    /// start:end:step, inclusive.
    #[arg(long, default_value = "0:1:0.01")]
    grid: Grid,
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Output file; CSV also gets a gnuplot script alongside.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Equality tolerance on |N − D|.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Bisection bracket width.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Samples per profile and state kind.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Semicolon-separated dimension lists.
    #[arg(long, default_value = verify::DEFAULT_PROFILES)]
    profiles: String,
    /// Largest accepted |closed form − oracle|.
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    #[command(flatten)]
    search: SearchArgs,
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Measure(a) => {
            let input = match (&a.state, &a.family, &a.file) {
                (Some(s), _, _) => source::named(s)?,
                (_, Some(f), _) => source::from_family(f, a.p.expect("clap enforces --p"))?,
                (_, _, Some(path)) => source::from_file(path)?,
                _ => unreachable!("clap enforces one source"),
            };
            let report = measure::measure(&input, a.l, &a.search.config())?;
            if a.json {
                print_json(&report);
            } else {
                print!("{}", measure::render_text(&report));
            }
        }
        Command::Sweep(a) => {
            let report = sweep::sweep(a.family, &a.grid, a.l, a.tol)?;
            match &a.out {
                Some(path) => sweep::write_outputs(&report, path, a.json)?,
                None if a.json => print_json(&report),
                None => print!("{}", sweep::render_csv(&report)),
            }
        }
        Command::Threshold(a) => {
            let report = threshold::threshold(a.family, a.l, a.tol)?;
            if a.json {
                print_json(&report);
            } else {
                print!("{}", threshold::render_text(&report));
            }
        }
        Command::Verify(a) => {
            let opts = verify::VerifyOptions {
                count: a.count,
                profiles: verify::parse_profiles(&a.profiles)?,
                seed: a.search.seed,
                search: a.search.config(),
                tol: a.tol,
            };
            let (report, pass) = verify::verify(&opts)?;
            print!("{report}");
            if !pass {
                return Err(CliError::Numerical(format!("closed form and oracle differ by more than {}", a.tol)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
