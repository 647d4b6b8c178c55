use clap::{Args, ValueEnum};
use renyi_dpi::channels::random_state;
use renyi_dpi::entropies::ParamPoint;
use renyi_dpi::linalg::{relative_distance, ComplexMatrix};
use renyi_dpi::variational::{
    finite_difference_check, multi_start, psi_bridge, random_problem, random_start, solve_pair_equation,
    OptimizeOptions, PairEquation, Sense, TripleExponents, VariationalProblem,
};
use serde_json::{json, Value};

use crate::report::{matrix_value, CliError, Outcome, Tolerances};

/// Largest optimizer distance to the closed form still counted as agreement.
pub const AGREEMENT_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SenseArg {
    Min,
    Max,
}

#[derive(Debug, Args)]
pub struct VariationalArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r2: f64,
    #[arg(long, value_enum, default_value_t = SenseArg::Min)]
    pub sense: SenseArg,
    /// Take exponents, sense and `X = ρ^{p/2}`, `Y = σ^{q/2}` from an `(α, z)`
    /// point in case 1 or 2, and compare with `Ψ`.
    #[arg(long, requires = "z", allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha", allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub starts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    /// Use `X = Y = I`.
    #[arg(long, conflicts_with = "alpha")]
    pub identity: bool,
    /// Solve the scalar pair equation `K = diag(2)`, coefficients `(1, 2, −1, 1)`.
    #[arg(long)]
    pub pair_demo: bool,
}

fn sense_of(s: SenseArg) -> Sense {
    match s {
        SenseArg::Min => Sense::Min,
        SenseArg::Max => Sense::Max,
    }
}

fn build_problem(args: &VariationalArgs) -> Result<(VariationalProblem, Option<ParamPoint>, Value), CliError> {
    if let (Some(alpha), Some(z)) = (args.alpha, args.z) {
        let pt = ParamPoint::new(alpha, z)?;
        let rho = random_state(args.dim, args.seed)?;
        let sigma = random_state(args.dim, args.seed + 1)?;
        let bridge = psi_bridge(&pt, rho.pd(), sigma.pd())?;
        let (p, q) = (pt.p, pt.q);
        let exps = match bridge.sense {
            Sense::Min => TripleExponents::new(1.0 / (p + q), 1.0 / p, 1.0 / q)?,
            Sense::Max => TripleExponents::new(1.0 / p, 1.0 / (p + q), -1.0 / q)?,
        };
        let x = rho.power(p / 2.0)?.matrix().clone();
        let y = sigma.power(q / 2.0)?.matrix().clone();
        let vp = VariationalProblem::new(exps, x, y, bridge.sense)?;
        return Ok((vp, Some(pt), json!(bridge)));
    }
    let exps = TripleExponents::new(args.r0, args.r1, args.r2)?;
    let sense = sense_of(args.sense);
    let vp = if args.identity {
        let id = ComplexMatrix::identity(args.dim);
        VariationalProblem::new(exps, id.clone(), id, sense)?
    } else {
        random_problem(args.dim, exps, sense, args.seed)?
    };
    Ok((vp, None, Value::Null))
}

fn pair_demo() -> Result<Value, CliError> {
    let pe = PairEquation::new(ComplexMatrix::from_real_diag(&[2.0]), 1.0, 2.0, -1.0, 1.0)?;
    let (a, b) = solve_pair_equation(&pe)?;
    let residuals = pe.residuals(&a, &b)?;
    let (want_a, want_b) = (2f64.powf(4.0 / 3.0), 2f64.powf(2.0 / 3.0));
    Ok(json!({
        "k": matrix_value(&pe.k),
        "coefficients": [pe.a1, pe.a2, pe.b1, pe.b2],
        "a": matrix_value(a.matrix()),
        "b": matrix_value(b.matrix()),
        "expected_a": want_a,
        "expected_b": want_b,
        "a_error": (a.matrix()[(0, 0)].re - want_a).abs(),
        "b_error": (b.matrix()[(0, 0)].re - want_b).abs(),
        "residuals": residuals,
        "max_relative_residual": residuals.max_relative(),
    }))
}

pub fn run(args: &VariationalArgs, tol: &Tolerances) -> Result<Outcome, CliError> {
    if args.dim == 0 {
        return Err(CliError::validation("dimension must be positive"));
    }
    let (vp, point, bridge) = build_problem(args)?;
    let cf = vp.closed_form()?;
    let target = match vp.sense {
        Sense::Min => vp.trace_modulus_power(vp.exps.r0)?,
        Sense::Max => vp.trace_modulus_power(vp.exps.r1)?,
    };
    let oracle_rel = (cf.value - target).abs().max((cf.objective - target).abs()) / target;
    let grad = finite_difference_check(&vp, &random_start(vp.dim(), args.seed + 500)?, 10, args.seed)?;

    let opts = OptimizeOptions {
        grad_tol: tol.grad_tol,
        max_iter: args.max_iter,
        ..OptimizeOptions::default()
    };
    let identity = ComplexMatrix::identity(vp.dim());
    let mut rows = Vec::new();
    let mut max_distance: f64 = 0.0;
    for (i, r) in multi_start(&vp, args.starts, args.seed, &opts)?.into_iter().enumerate() {
        let distance = relative_distance(r.h.matrix(), cf.h.matrix())?;
        max_distance = max_distance.max(distance);
        rows.push(json!({
            "start_seed": args.seed.wrapping_mul(1000).wrapping_add(i as u64),
            "iterations": r.iterations,
            "value": r.value,
            "relative_gradient": r.grad_norm / r.grad_scale,
            "distance_to_closed_form": distance,
            "distance_to_identity": relative_distance(r.h.matrix(), &identity)?,
        }));
    }
    let agree = max_distance <= AGREEMENT_TOL;
    let oracle_ok = oracle_rel <= tol.cert.cert_tol;
    let pair = if args.pair_demo { pair_demo()? } else { Value::Null };

    let start_seeds: Vec<u64> = (0..args.starts as u64)
        .map(|i| args.seed.wrapping_mul(1000).wrapping_add(i))
        .collect();
    let result = json!({
        "dim": vp.dim(),
        "exponents": vp.exps,
        "sense": vp.sense,
        "identity_problem": args.identity,
        "closed_form": {
            "h": matrix_value(cf.h.matrix()),
            "value": cf.value,
            "objective": cf.objective,
            "dual_form": cf.dual_form,
            "balance": cf.balance,
            "distance_to_identity": relative_distance(cf.h.matrix(), &identity)?,
        },
        "trace_oracle": {
            "target": target,
            "relative_error": oracle_rel,
            "verdict": oracle_ok,
        },
        "gradient_check": {
            "directions": grad.directions,
            "max_abs": grad.max_abs,
            "scale": grad.scale,
            "step": grad.step,
            "relative_error": grad.rel(),
        },
        "multi_start": {
            "starts": rows,
            "max_distance_to_closed_form": max_distance,
            "agreement_tol": AGREEMENT_TOL,
            "agree": agree,
        },
        "psi_bridge": bridge,
        "pair": pair,
    });
    Ok(Outcome {
        seeds: json!({ "problem": args.seed, "starts": start_seeds, "gradient_check": args.seed, "gradient_point": args.seed + 500 }),
        point,
        result,
        violation: !(agree && oracle_ok),
    })
}
