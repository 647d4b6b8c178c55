use std::path::PathBuf;

use clap::Args;
use renyi_dpi::channels::random_state;
use renyi_dpi::entropies::{d_alpha_z, d_petz, d_sandwiched, d_umegaki, ParamPoint};
use serde_json::{json, Value};

use super::read_state;
use crate::report::{CliError, Outcome, Tolerances};

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
    /// State file (matrix JSON); generated from `--seed` when absent.
    #[arg(long, requires = "sigma")]
    pub rho: Option<PathBuf>,
    #[arg(long, requires = "rho")]
    pub sigma: Option<PathBuf>,
    /// Dimension of generated states.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// ρ uses this seed and σ the next one.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run(args: &EntropyArgs, _tol: &Tolerances) -> Result<Outcome, CliError> {
    let pt = ParamPoint::new(args.alpha, args.z)?;
    let (rho, sigma, seeds, source) = match (&args.rho, &args.sigma) {
        (Some(r), Some(s)) => (
            read_state(r)?,
            read_state(s)?,
            Value::Null,
            json!({ "rho": r.display().to_string(), "sigma": s.display().to_string() }),
        ),
        _ => (
            random_state(args.dim, args.seed)?,
            random_state(args.dim, args.seed + 1)?,
            json!({ "rho": args.seed, "sigma": args.seed + 1 }),
            json!({ "generated_dim": args.dim }),
        ),
    };
    if rho.dim() != sigma.dim() {
        return Err(CliError::validation(format!(
            "ρ has dimension {} but σ has dimension {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let result = json!({
        "source": source,
        "dim": rho.dim(),
        "d_alpha_z": d_alpha_z(&pt, &rho, &sigma)?,
        "d_petz": d_petz(args.alpha, &rho, &sigma)?,
        "d_sandwiched": d_sandwiched(args.alpha, &rho, &sigma)?,
        "d_umegaki": d_umegaki(&rho, &sigma)?,
    });
    Ok(Outcome {
        seeds,
        point: Some(pt),
        result,
        violation: false,
    })
}
