//! Closed forms against the direct-definition oracle on random states.
//!
//! Sample `i` of kind `k` on profile `j` draws from stream
//! `(j << 40) | (k << 32) | i` of the base seed, and its oracle search is
//! seeded with `seed + stream`, so reports do not depend on thread count.

use minlab::measures::{discord_pure, discord_qubit, min_general_nondegenerate, min_pure, min_qubit};
use minlab::oracle::{discord_direct, min_direct, SearchConfig};
use minlab::qcore::{DensityOperator, DimensionProfile};
use minlab::states::{haar_pure_with, random_mixed_with, rng_stream};
use minlab::Error;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::format::sig;

pub const DEFAULT_PROFILES: &str = "2,2;2,3;2,2,2";
const MIXED_RANK: usize = 2;

pub fn parse_profiles(s: &str) -> CliResult<Vec<DimensionProfile>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let dims = t
                .split(',')
                .map(|d| {
                    d.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad dimension '{d}' in '{t}'")))
                })
                .collect::<CliResult<Vec<_>>>()?;
            DimensionProfile::new(dims).map_err(CliError::usage)
        })
        .collect::<CliResult<Vec<_>>>()
        .and_then(|v| if v.is_empty() { Err(CliError::Usage("no profiles given".into())) } else { Ok(v) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Pure,
    Mixed,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Kind::Pure => "pure",
            Kind::Mixed => "mixed",
        }
    }
}

#[derive(Default)]
struct Tally {
    n_checks: usize,
    n_max: f64,
    d_checks: usize,
    d_max: f64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.n_checks += other.n_checks;
        self.d_checks += other.d_checks;
        self.n_max = self.n_max.max(other.n_max);
        self.d_max = self.d_max.max(other.d_max);
        self
    }
}

fn check_sample(
    profile: &DimensionProfile,
    kind: Kind,
    rho: &DensityOperator<f64>,
    pure: Option<&minlab::PureState64>,
    cfg: &SearchConfig,
) -> CliResult<Tally> {
    let mut t = Tally::default();
    for l in 0..profile.parties() {
        let qubit = profile.dim(l) == 2;
        let n_closed = match (kind, pure) {
            (Kind::Pure, Some(psi)) => Some(min_pure(psi, l)?),
            _ if qubit => Some(min_qubit(rho, l)?),
            _ => match min_general_nondegenerate(rho, l) {
                Ok(v) => Some(v),
                Err(Error::DegenerateMarginal(_)) => None,
                Err(e) => return Err(e.into()),
            },
        };
        let d_closed = match (kind, pure) {
            (Kind::Pure, Some(psi)) => Some(discord_pure(psi, l)?),
            _ if qubit => Some(discord_qubit(rho, l)?),
            _ => None,
        };
        if let Some(n) = n_closed {
            let oracle = min_direct(rho, l, cfg)?.value;
            t.n_checks += 1;
            t.n_max = t.n_max.max((n - oracle).abs());
        }
        if let Some(d) = d_closed {
            let oracle = discord_direct(rho, l, cfg)?.value;
            t.d_checks += 1;
            t.d_max = t.d_max.max((d - oracle).abs());
        }
    }
    Ok(t)
}

pub struct VerifyOptions {
    pub count: usize,
    pub profiles: Vec<DimensionProfile>,
    pub seed: u64,
    pub search: SearchConfig,
    pub tol: f64,
}

/// Runs the comparison; returns the report text and whether every deviation is within `tol`.
pub fn verify(opts: &VerifyOptions) -> CliResult<(String, bool)> {
    opts.search.validate().map_err(CliError::usage)?;
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let mut out = format!(
        "verify seed {} count {} grid-points {} restarts {} tol {}\n",
        opts.seed,
        opts.count,
        opts.search.grid_points,
        opts.search.restarts,
        sig(opts.tol)
    );
    let mut all_pass = true;
    for (j, profile) in opts.profiles.iter().enumerate() {
        for kind in [Kind::Pure, Kind::Mixed] {
            let tallies = (0..opts.count)
                .into_par_iter()
                .map(|i| {
                    let stream = ((j as u64) << 40) | ((kind as u64) << 32) | i as u64;
                    let mut rng = rng_stream(opts.seed, stream);
                    let cfg = SearchConfig { seed: opts.seed.wrapping_add(stream), ..opts.search };
                    match kind {
                        Kind::Pure => {
                            let psi = haar_pure_with::<f64, _>(profile, &mut rng);
                            check_sample(profile, kind, &psi.density(), Some(&psi), &cfg)
                        }
                        Kind::Mixed => {
                            let rank = MIXED_RANK.min(profile.total());
                            let rho = random_mixed_with::<f64, _>(profile, rank, &mut rng)?;
                            check_sample(profile, kind, &rho, None, &cfg)
                        }
                    }
                })
                .collect::<CliResult<Vec<_>>>()?;
            let tally = tallies.into_iter().fold(Tally::default(), Tally::merge);
            let pass = tally.n_max <= opts.tol && tally.d_max <= opts.tol;
            all_pass &= pass;
            let dims: Vec<String> = profile.dims().iter().map(|d| d.to_string()).collect();
            out.push_str(&format!(
                "profile {:<9} {:<5}  samples {:>4}  N checks {:>5}  max|dN| {:.3e}  D checks {:>5}  max|dD| {:.3e}  {}\n",
                dims.join(","),
                kind.label(),
                opts.count,
                tally.n_checks,
                tally.n_max,
                tally.d_checks,
                tally.d_max,
                if pass { "PASS" } else { "FAIL" }
            ));
        }
    }
    out.push_str(if all_pass { "overall PASS\n" } else { "overall FAIL\n" });
    Ok((out, all_pass))
}
