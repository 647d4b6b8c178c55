use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use clap::Args;
use rayon::prelude::*;
use renyi_dpi::entropies::{d_alpha_z, ParamPoint};
use renyi_dpi::fixtures::{make_fixture, FixtureKind, DPI_GRID};
use serde::Serialize;
use serde_json::json;

use super::parse_list;
use crate::report::{CliError, Outcome, Tolerances};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "RENYI_DPI_THREADS";

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated `alpha:z` points; the default is the built-in region
    /// grid and an empty string gives an empty sweep.
    #[arg(long)]
    pub points: Option<String>,
    #[arg(long, default_value = "2,3,4")]
    pub dims: String,
    /// Number of seeds per (point, dimension).
    #[arg(long, default_value_t = 200)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Completed items are appended here as JSON lines while the sweep runs;
    /// defaults to `<output>.partial.jsonl` when `--output` is set. Removed
    /// once the sweep finishes.
    #[arg(long)]
    pub partial: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
struct Item {
    alpha: f64,
    z: f64,
    dim: usize,
    seed: u64,
    in_region: bool,
    d_input: Option<f64>,
    d_output: Option<f64>,
    gap: Option<f64>,
    /// Numerical failure evaluating this item.
    error: Option<String>,
}

fn parse_points(text: &str) -> Result<Vec<ParamPoint>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (a, z) = s
                .split_once(':')
                .ok_or_else(|| CliError::validation(format!("point `{s}` is not alpha:z")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::validation(format!("point `{s}` has a non-numeric coordinate")))
            };
            Ok(ParamPoint::new(parse(a)?, parse(z)?)?)
        })
        .collect()
}

pub fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::validation(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn divergences(pt: &ParamPoint, dim: usize, seed: u64) -> renyi_dpi::Result<(f64, f64)> {
    let f = make_fixture(FixtureKind::Random, dim, seed)?;
    let d_input = d_alpha_z(pt, &f.rho, &f.sigma)?;
    let d_output = d_alpha_z(pt, &f.channel.apply_state(&f.rho)?, &f.channel.apply_state(&f.sigma)?)?;
    Ok((d_input, d_output))
}

fn evaluate(pt: &ParamPoint, dim: usize, seed: u64) -> Item {
    let (values, error) = match divergences(pt, dim, seed) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Item {
        alpha: pt.alpha,
        z: pt.z,
        dim,
        seed,
        in_region: pt.region().valid,
        d_input: values.map(|v| v.0),
        d_output: values.map(|v| v.1),
        gap: values.map(|v| v.0 - v.1),
        error,
    }
}

pub fn run(args: &SweepArgs, tol: &Tolerances, output: Option<&Path>) -> Result<Outcome, CliError> {
    let points = match &args.points {
        Some(text) => parse_points(text)?,
        None => DPI_GRID
            .iter()
            .map(|&(a, z)| ParamPoint::new(a, z))
            .collect::<renyi_dpi::Result<_>>()?,
    };
    let dims: Vec<usize> = parse_list(&args.dims, "dimension")?;
    if dims.contains(&0) {
        return Err(CliError::validation("dimensions must be positive"));
    }
    let work: Vec<(usize, usize, u64)> = (0..points.len())
        .flat_map(|p| {
            dims.iter()
                .flat_map(move |&d| (0..args.seeds).map(move |i| (p, d, args.seed_base + i)))
        })
        .collect();

    let partial_path = args
        .partial
        .clone()
        .or_else(|| output.map(|o| PathBuf::from(format!("{}.partial.jsonl", o.display()))));
    let partial = match &partial_path {
        Some(p) => Some(Mutex::new(File::create(p).map_err(|e| CliError::io(p, e))?)),
        None => None,
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::validation(format!("cannot start worker pool: {e}")))?;
    let items: Vec<Item> = pool.install(|| {
        work.par_iter()
            .enumerate()
            .map(|(index, &(p, dim, seed))| {
                let item = evaluate(&points[p], dim, seed);
                if let Some(file) = &partial {
                    let line = json!({ "index": index, "item": item });
                    let mut f = file.lock().unwrap_or_else(|e| e.into_inner());
                    let _ = writeln!(f, "{line}");
                }
                item
            })
            .collect()
    });
    if let Some(p) = &partial_path {
        let _ = std::fs::remove_file(p);
    }

    let in_region: Vec<&Item> = items.iter().filter(|i| i.in_region).collect();
    let below = |i: &&Item| i.gap.is_some_and(|g| g < -tol.cert.dpi_slack);
    let min_gap = in_region.iter().filter_map(|i| i.gap).reduce(f64::min);
    let violations: Vec<&Item> = in_region.iter().copied().filter(below).collect();
    let failed: Vec<&Item> = items.iter().filter(|i| i.error.is_some()).collect();
    let mut point_summaries = Vec::new();
    for (p, pt) in points.iter().enumerate() {
        let per_point = dims.len() * args.seeds as usize;
        let slice = &items[p * per_point..(p + 1) * per_point];
        let worst = slice
            .iter()
            .filter_map(|i| i.gap.map(|g| (g, i)))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, i)| i);
        point_summaries.push(json!({
            "alpha": pt.alpha,
            "z": pt.z,
            "p": pt.p,
            "q": pt.q,
            "region": pt.region(),
            "items": slice.len(),
            "min_gap": worst.map(|w| w.gap),
            "min_gap_at": worst.map(|w| json!({ "dim": w.dim, "seed": w.seed })),
            "below_slack": slice.iter().filter(below).count(),
            "failed_items": slice.iter().filter(|i| i.error.is_some()).count(),
        }));
    }
    let result = json!({
        "points": point_summaries,
        "dims": dims,
        "summary": {
            "items": items.len(),
            "in_region_items": in_region.len(),
            "min_in_region_gap": min_gap,
            "violation_count": violations.len(),
            "violations": violations,
            "failed_items": failed.len(),
            "failed_in_region": failed.iter().filter(|i| i.in_region).count(),
        },
        "items": items,
    });
    Ok(Outcome {
        seeds: json!({ "base": args.seed_base, "count": args.seeds }),
        point: None,
        result,
        violation: !violations.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_parse_and_validate() {
        let pts = parse_points("1.5:1, 3:0.5").unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts[0].region().valid && !pts[1].region().valid);
        assert!(parse_points("").unwrap().is_empty());
        assert!(parse_points("1:1").is_err());
        assert!(parse_points("1.5").is_err());
        assert!(parse_points("a:1").is_err());
    }
}
