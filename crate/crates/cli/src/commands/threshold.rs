//! Boundaries of the Case I equality region along a family.
//!
//! The eigenvalue condition `||s||² + η_s ≥ η_i` is tracked through its
//! margin. The margin is sampled on a fine grid (points with a vanishing
//! coherent vector fall under Case II and are skipped), every sign change is
//! bracketed, and each bracket is bisected down to `tol`. The reported value
//! is the secant root inside the final bracket.

use minlab::bloch::bloch_decompose;
use minlab::measures::{equality_verdict, EqualityCase};
use minlab::states::{family, Family, FamilySpec};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::format::sig;

const SCAN_INTERVALS: usize = 2000;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Serialize)]
pub struct Boundary {
    pub p: f64,
    pub bracket: [f64; 2],
    /// The condition holds just below `p`.
    pub satisfied_below: bool,
}

#[derive(Debug, Serialize)]
pub struct ThresholdReport {
    pub family: String,
    pub l: usize,
    pub tol: f64,
    pub boundaries: Vec<Boundary>,
}

fn margin(fam: Family, p: f64, l: usize) -> CliResult<Option<f64>> {
    let spec = FamilySpec::new(fam, p).map_err(CliError::usage)?;
    let v = equality_verdict(&bloch_decompose(&family::<f64>(&spec))?, l)?;
    Ok(match v.case {
        EqualityCase::CaseI => v.margin,
        _ => None,
    })
}

pub fn threshold(fam: Family, l1: usize, tol: f64) -> CliResult<ThresholdReport> {
    if !(1..=3).contains(&l1) {
        return Err(CliError::Usage(format!("--l must be in 1..=3 for the example families, got {l1}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let l = l1 - 1;
    let ps: Vec<f64> = (0..=SCAN_INTERVALS).map(|i| i as f64 / SCAN_INTERVALS as f64).collect();
    let ms = ps.iter().map(|&p| margin(fam, p, l)).collect::<CliResult<Vec<_>>>()?;

    let mut boundaries = Vec::new();
    for i in 0..SCAN_INTERVALS {
        let (Some(m0), Some(m1)) = (ms[i], ms[i + 1]) else { continue };
        if (m0 >= 0.0) == (m1 >= 0.0) {
            continue;
        }
        let (mut a, mut b, mut fa, mut fb) = (ps[i], ps[i + 1], m0, m1);
        for _ in 0..MAX_BISECTIONS {
            if b - a <= tol {
                break;
            }
            let mid = 0.5 * (a + b);
            let Some(fm) = margin(fam, mid, l)? else { break };
            if (fm >= 0.0) == (fa >= 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
                fb = fm;
            }
        }
        let p = (a - fa * (b - a) / (fb - fa)).clamp(a, b);
        boundaries.push(Boundary { p, bracket: [a, b], satisfied_below: m0 >= 0.0 });
    }
    Ok(ThresholdReport { family: fam.name().to_string(), l: l1, tol, boundaries })
}

pub fn render_text(r: &ThresholdReport) -> String {
    let mut out = format!("family {}  l {}  tol {}\n", r.family, r.l, sig(r.tol));
    if r.boundaries.is_empty() {
        out.push_str("no boundary: the Case I condition does not change sign\n");
    }
    for b in &r.boundaries {
        let side = if b.satisfied_below { "below" } else { "above" };
        out.push_str(&format!(
            "boundary {}  bracket [{}, {}]  satisfied {side}\n",
            sig(b.p),
            sig(b.bracket[0]),
            sig(b.bracket[1])
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_w_quarter() {
        let r = threshold(Family::GhzW, 1, 1e-4).unwrap();
        assert_eq!(r.boundaries.len(), 1);
        assert!((r.boundaries[0].p - 0.25).abs() < 1e-6);
        assert!(r.boundaries[0].satisfied_below);
    }

    #[test]
    fn wt_w_pair() {
        let r = threshold(Family::WtW, 1, 1e-4).unwrap();
        let ps: Vec<f64> = r.boundaries.iter().map(|b| b.p).collect();
        assert_eq!(ps.len(), 2);
        assert!((ps[0] - 0.1127).abs() < 1e-3 && (ps[1] - 0.8873).abs() < 1e-3, "{ps:?}");
        assert!(r.boundaries[0].satisfied_below && !r.boundaries[1].satisfied_below);
    }

    #[test]
    fn case_two_families_have_none() {
        assert!(threshold(Family::GhzGhz1, 1, 1e-4).unwrap().boundaries.is_empty());
        assert!(threshold(Family::GhzGhzMinus, 1, 1e-4).unwrap().boundaries.is_empty());
    }
}
