use minlab::bloch::bloch_decompose;
use minlab::measures::{
    discord_pure, discord_qubit_bloch, equality_verdict, k_matrix, min_general_nondegenerate_bloch, min_pure,
    min_qubit_bloch,
};
use minlab::oracle::{discord_direct, min_direct, SearchConfig};
use minlab::Error;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::format::{clean, sig};
use crate::source::StateInput;

#[derive(Debug, Serialize)]
pub struct MeasureReport {
    pub state: String,
    pub dims: Vec<usize>,
    /// 1-based measured subsystem.
    pub l: usize,
    #[serde(rename = "N")]
    pub n: f64,
    pub n_method: &'static str,
    #[serde(rename = "D")]
    pub d: f64,
    pub d_method: &'static str,
    pub eta: Vec<f64>,
    pub s_norm: f64,
    pub case: &'static str,
    pub predicted_equal: bool,
    pub margin: Option<f64>,
}

pub fn measure(input: &StateInput, l1: usize, cfg: &SearchConfig) -> CliResult<MeasureReport> {
    let profile = input.rho.profile();
    if l1 == 0 || l1 > profile.parties() {
        return Err(CliError::Usage(format!("--l must be in 1..={}, got {l1}", profile.parties())));
    }
    let l = l1 - 1;
    let qubit = profile.dim(l) == 2;
    let bloch = bloch_decompose(&input.rho)?;

    let (n, n_method) = match &input.pure {
        Some(psi) => (min_pure(psi, l)?, "pure"),
        None if qubit => (min_qubit_bloch(&bloch, l)?, "qubit"),
        None => match min_general_nondegenerate_bloch(&bloch, l) {
            Ok(v) => (v, "nondegenerate"),
            Err(Error::DegenerateMarginal(_)) => (min_direct(&input.rho, l, cfg)?.value, "oracle"),
            Err(e) => return Err(e.into()),
        },
    };
    let (d, d_method) = match &input.pure {
        Some(psi) => (discord_pure(psi, l)?, "pure"),
        None if qubit => (discord_qubit_bloch(&bloch, l)?, "qubit"),
        None => (discord_direct(&input.rho, l, cfg)?.value, "oracle"),
    };

    let eta = k_matrix(&bloch, l)?.eigenvalues()?.into_iter().map(clean).collect();
    let s_norm = bloch.coherent(l)?.iter().map(|x| x * x).sum::<f64>().sqrt();
    let verdict = equality_verdict(&bloch, l)?;
    Ok(MeasureReport {
        state: input.label.clone(),
        dims: profile.dims().to_vec(),
        l: l1,
        n: clean(n),
        n_method,
        d: clean(d),
        d_method,
        eta,
        s_norm: clean(s_norm),
        case: verdict.case.label(),
        predicted_equal: verdict.predicted_equal,
        margin: verdict.margin.map(clean),
    })
}

pub fn render_text(r: &MeasureReport) -> String {
    let dims: Vec<String> = r.dims.iter().map(|d| d.to_string()).collect();
    let eta: Vec<String> = r.eta.iter().map(|&x| sig(x)).collect();
    let mut out = String::new();
    out.push_str(&format!("state            {}\n", r.state));
    out.push_str(&format!("dims             {}\n", dims.join(",")));
    out.push_str(&format!("l                {}\n", r.l));
    out.push_str(&format!("N                {}  ({})\n", sig(r.n), r.n_method));
    out.push_str(&format!("D                {}  ({})\n", sig(r.d), r.d_method));
    out.push_str(&format!("eta              {}\n", eta.join(" ")));
    out.push_str(&format!("s_norm           {}\n", sig(r.s_norm)));
    out.push_str(&format!("case             {}\n", r.case));
    if let Some(m) = r.margin {
        out.push_str(&format!("margin           {}\n", sig(m)));
    }
    out.push_str(&format!("predicted_equal  {}\n", r.predicted_equal));
    out
}
