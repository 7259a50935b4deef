use std::path::Path;

use minlab::bloch::bloch_decompose;
use minlab::measures::{discord_qubit_bloch, equality_verdict, k_matrix, min_qubit_bloch};
use minlab::states::{family, Family, FamilySpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::format::{clean, round_sig, sig};

pub const CSV_HEADER: &str = "p,N,D,eta1,eta2,eta3,s_norm,case,predicted_equal,observed_equal";

/// Inclusive parameter grid parsed from `start:end:step`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub points: Vec<f64>,
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, end, step] = parts.as_slice() else {
            return Err(format!("grid '{s}' must look like start:end:step"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("grid value '{t}' is not a number"));
        let (start, end, step) = (num(start)?, num(end)?, num(step)?);
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
            return Err(format!("grid must satisfy 0 <= start <= end <= 1, got {start}:{end}"));
        }
        if step.is_nan() || step <= 0.0 {
            return Err("grid step must be positive".into());
        }
        let span = end - start;
        let ratio = span / step;
        let steps = ratio.round();
        let points = if (ratio - steps).abs() < 1e-9 * ratio.max(1.0) {
            // The step divides the range: evenly spaced, both endpoints exact.
            let n = steps as usize;
            if n == 0 {
                vec![start]
            } else {
                (0..=n).map(|i| start + span * i as f64 / n as f64).collect()
            }
        } else {
            let n = ratio.floor() as usize;
            (0..=n).map(|i| start + step * i as f64).collect()
        };
        if points.len() > 10_000_000 {
            return Err("grid has too many points".into());
        }
        Ok(Grid { points })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub eta: [f64; 3],
    pub s_norm: f64,
    pub case: String,
    pub predicted_equal: bool,
    pub observed_equal: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub l: usize,
    pub tol_eq: f64,
    pub rows: Vec<SweepRow>,
}

/// Equality as judged from the reported (rounded) values.
pub fn observed_equal(n: f64, d: f64, tol_eq: f64) -> bool {
    (n - d).abs() < tol_eq
}

fn row(fam: Family, p: f64, l: usize, tol_eq: f64) -> CliResult<SweepRow> {
    let spec = FamilySpec::new(fam, p).map_err(CliError::usage)?;
    let bloch = bloch_decompose(&family::<f64>(&spec))?;
    let n = round_sig(clean(min_qubit_bloch(&bloch, l)?));
    let d = round_sig(clean(discord_qubit_bloch(&bloch, l)?));
    let eta = k_matrix(&bloch, l)?.eigenvalues()?;
    let s_norm = bloch.coherent(l)?.iter().map(|x| x * x).sum::<f64>().sqrt();
    let verdict = equality_verdict(&bloch, l)?;
    Ok(SweepRow {
        p: round_sig(p),
        n,
        d,
        eta: [round_sig(clean(eta[0])), round_sig(clean(eta[1])), round_sig(clean(eta[2]))],
        s_norm: round_sig(clean(s_norm)),
        case: verdict.case.label().to_string(),
        predicted_equal: verdict.predicted_equal,
        observed_equal: observed_equal(n, d, tol_eq),
    })
}

pub fn sweep(fam: Family, grid: &Grid, l1: usize, tol_eq: f64) -> CliResult<SweepReport> {
    if !(1..=3).contains(&l1) {
        return Err(CliError::Usage(format!("--l must be in 1..=3 for the example families, got {l1}")));
    }
    if tol_eq.is_nan() || tol_eq <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let rows = grid.points.par_iter().map(|&p| row(fam, p, l1 - 1, tol_eq)).collect::<CliResult<Vec<_>>>()?;
    Ok(SweepReport { family: fam.name().to_string(), l: l1, tol_eq, rows })
}

pub fn render_csv(report: &SweepReport) -> String {
    let mut out = String::with_capacity(96 * (report.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let fields = [
            sig(r.p),
            sig(r.n),
            sig(r.d),
            sig(r.eta[0]),
            sig(r.eta[1]),
            sig(r.eta[2]),
            sig(r.s_norm),
            r.case.clone(),
            r.predicted_equal.to_string(),
            r.observed_equal.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Gnuplot script that plots N and D from the CSV next to it.
pub fn plot_script(csv_name: &str, report: &SweepReport) -> String {
    format!(
        "# N and D along the {fam} family, measured part l = {l}\n\
         set datafile separator ','\n\
         set key top left\n\
         set xlabel 'p'\n\
         set ylabel 'value'\n\
         set xrange [0:1]\n\
         plot '{csv}' using 1:2 skip 1 with lines lw 2 title 'N_{l}', \\\n\
         \x20    '' using 1:3 skip 1 with lines lw 2 dt 2 title 'D_{l}'\n",
        fam = report.family,
        l = report.l,
        csv = csv_name,
    )
}

pub fn write_outputs(report: &SweepReport, out: &Path, json: bool) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", out.display()));
    if json {
        let text = serde_json::to_string_pretty(report).expect("report serializes");
        return std::fs::write(out, text + "\n").map_err(io);
    }
    std::fs::write(out, render_csv(report)).map_err(io)?;
    let script = out.with_extension("gp");
    let name = out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    std::fs::write(&script, plot_script(&name, report)).map_err(|e| CliError::Io(format!("{}: {e}", script.display())))
}
