use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use renyi_dpi::channels::{make_channel, random_state, ChannelSpec};
use renyi_dpi::fixtures::{make_fixture, FixtureKind};
use renyi_dpi::linalg::matrix_to_json;
use serde_json::json;

use crate::report::{CliError, Outcome};

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub what: GenTarget,
}

#[derive(Debug, Subcommand)]
pub enum GenTarget {
    /// Seeded random faithful state, as matrix JSON.
    State {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Channel from a JSON spec such as `{"kind":"depolarizing","dim":2,"p":0.3}`.
    Channel {
        #[arg(long)]
        spec: String,
    },
    /// Writes `rho.json`, `sigma.json` and `channel.json` of a fixture.
    Fixture {
        #[arg(long)]
        fixture: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

/// Output of `gen`: raw codec text for a single object, or a report listing
/// written files.
pub enum Generated {
    Data(String),
    Report(Outcome),
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn run(args: &GenArgs) -> Result<Generated, CliError> {
    match &args.what {
        GenTarget::State { dim, seed } => Ok(Generated::Data(matrix_to_json(random_state(*dim, *seed)?.matrix()))),
        GenTarget::Channel { spec } => {
            let spec: ChannelSpec =
                serde_json::from_str(spec).map_err(|e| CliError::validation(format!("bad channel spec: {e}")))?;
            Ok(Generated::Data(make_channel(&spec)?.to_json()))
        }
        GenTarget::Fixture {
            fixture,
            dim,
            seed,
            out_dir,
        } => {
            let kind: FixtureKind = fixture.parse()?;
            let f = make_fixture(kind, *dim, *seed)?;
            std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
            let files = [
                ("rho", out_dir.join("rho.json"), matrix_to_json(f.rho.matrix())),
                ("sigma", out_dir.join("sigma.json"), matrix_to_json(f.sigma.matrix())),
                ("channel", out_dir.join("channel.json"), f.channel.to_json()),
            ];
            let mut written = serde_json::Map::new();
            for (name, path, text) in &files {
                write(path, text)?;
                written.insert(name.to_string(), json!(path.display().to_string()));
            }
            Ok(Generated::Report(Outcome {
                seeds: json!({ "fixture": seed }),
                point: None,
                result: json!({
                    "fixture": kind.name(),
                    "dim": dim,
                    "dim_in": f.channel.dim_in(),
                    "dim_out": f.channel.dim_out(),
                    "files": written,
                }),
                violation: false,
            }))
        }
    }
}

pub fn write_data(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
