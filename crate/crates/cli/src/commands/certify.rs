use std::path::PathBuf;

use clap::Args;
use renyi_dpi::certificates::{certify_with_claims, check_conditions, recovery_2_2, recovery_summary, EqualityTriple};
use renyi_dpi::entropies::ParamPoint;
use renyi_dpi::fixtures::{make_fixture, FixtureKind};
use renyi_dpi::linalg::relative_distance;
use serde_json::{json, Value};

use super::{read_channel, read_state};
use crate::report::{CliError, Outcome, Tolerances};

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
    /// identity, unitary, pinching, product_partial_trace or random.
    #[arg(long, conflicts_with_all = ["rho", "sigma", "channel"])]
    pub fixture: Option<String>,
    #[arg(long, requires_all = ["sigma", "channel"])]
    pub rho: Option<PathBuf>,
    #[arg(long, requires_all = ["rho", "channel"])]
    pub sigma: Option<PathBuf>,
    #[arg(long, requires_all = ["rho", "sigma"])]
    pub channel: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 11)]
    pub seed: u64,
    /// Add the twirled proof-artifact claims.
    #[arg(long)]
    pub with_proof_artifacts: bool,
    /// Add recovery-map residuals.
    #[arg(long)]
    pub with_recovery: bool,
}

fn recovery_section(t: &EqualityTriple) -> Result<Value, CliError> {
    let general = recovery_summary(&t.pt, &t.rho, &t.sigma, &t.channel)?;
    let at_two_two = (t.pt.alpha - 2.0).abs() < 1e-12 && (t.pt.z - 2.0).abs() < 1e-12;
    let petz_type = if at_two_two {
        let r = recovery_2_2(&t.sigma, &t.channel)?;
        let mut worst: f64 = 0.0;
        for s in [&t.rho, &t.sigma] {
            let back = r.apply_matrix(t.channel.apply_state(s)?.matrix())?;
            worst = worst.max(relative_distance(&back, s.matrix())?);
        }
        json!({
            "choi_min_eig": r.choi().eig()?.min(),
            "trace_preservation_defect": r.trace_preservation_defect(),
            "max_state_recovery": worst,
        })
    } else {
        Value::Null
    };
    Ok(json!({ "general": general, "two_two": petz_type }))
}

pub fn run(args: &CertifyArgs, tol: &Tolerances) -> Result<Outcome, CliError> {
    let pt = ParamPoint::new(args.alpha, args.z)?;
    let (rho, sigma, channel, seeds, source) = match (&args.fixture, &args.rho, &args.sigma, &args.channel) {
        (_, Some(r), Some(s), Some(c)) => (
            read_state(r)?,
            read_state(s)?,
            read_channel(c)?,
            Value::Null,
            json!({
                "rho": r.display().to_string(),
                "sigma": s.display().to_string(),
                "channel": c.display().to_string(),
            }),
        ),
        (name, None, None, None) => {
            let kind: FixtureKind = name.as_deref().unwrap_or("random").parse()?;
            let f = make_fixture(kind, args.dim, args.seed)?;
            (
                f.rho,
                f.sigma,
                f.channel,
                json!({ "fixture": args.seed }),
                json!({ "fixture": kind.name(), "dim": args.dim, "equality_case": kind.is_equality_case() }),
            )
        }
        _ => {
            return Err(CliError::validation(
                "give --fixture or all of --rho, --sigma and --channel",
            ))
        }
    };
    let triple = EqualityTriple::new(rho, sigma, channel, pt)?;
    let report = if args.with_proof_artifacts {
        certify_with_claims(&triple, &tol.cert)?
    } else {
        check_conditions(&triple, &tol.cert)?
    };
    let recovery = if args.with_recovery {
        recovery_section(&triple)?
    } else {
        Value::Null
    };
    let result = json!({
        "source": source,
        "all_conditions_hold": report.all_conditions_hold(),
        "certificate": report,
        "recovery": recovery,
    });
    Ok(Outcome {
        seeds,
        point: Some(pt),
        violation: report.has_violations(),
        result,
    })
}
