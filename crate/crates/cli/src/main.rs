//! `renyi-dpi`: entropies, DPI sweeps, equality certificates and variational
//! checks from the command line, reported as JSON.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use commands::certify::CertifyArgs;
use commands::entropy::EntropyArgs;
use commands::gen::{GenArgs, Generated};
use commands::sweep::SweepArgs;
use commands::variational::VariationalArgs;
use report::{envelope, to_table, CliError, Outcome, Tolerances, EXIT_OK, EXIT_VALIDATION, EXIT_VIOLATION};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "renyi-dpi",
    version,
    about = "Alpha-z Rényi relative entropies and data-processing checks"
)]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Tolerance override `NAME=VALUE` for cert_tol, dpi_eq_tol, dpi_slack or
    /// grad_tol; each must lie in [1e-14, 1e-2].
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// D_{α,z}, Petz, sandwiched and Umegaki divergences of a pair of states.
    Entropy(EntropyArgs),
    /// DPI gaps over a grid of (α, z), dimensions and seeds.
    DpiSweep(SweepArgs),
    /// Equality conditions, proof artifacts and recovery maps for a triple.
    Certify(CertifyArgs),
    /// Closed-form optimizers against multi-start optimization.
    Variational(VariationalArgs),
    /// Write states, channels or fixtures as JSON.
    Gen(GenArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Entropy(_) => "entropy",
            Command::DpiSweep(_) => "dpi-sweep",
            Command::Certify(_) => "certify",
            Command::Variational(_) => "variational",
            Command::Gen(_) => "gen",
        }
    }
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).unwrap_or_default(),
        Format::Table => to_table(value),
    }
}

fn emit(cli: &Cli, value: &Value) -> Result<(), CliError> {
    let text = render(value, cli.format);
    match &cli.output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let tol = Tolerances::with_overrides(&cli.tol)?;
    let outcome: Outcome = match &cli.command {
        Command::Entropy(a) => commands::entropy::run(a, &tol)?,
        Command::DpiSweep(a) => commands::sweep::run(a, &tol, cli.output.as_deref())?,
        Command::Certify(a) => commands::certify::run(a, &tol)?,
        Command::Variational(a) => commands::variational::run(a, &tol)?,
        Command::Gen(a) => match commands::gen::run(a)? {
            Generated::Data(text) => {
                commands::gen::write_data(cli.output.as_deref(), &text)?;
                return Ok(EXIT_OK);
            }
            Generated::Report(o) => o,
        },
    };
    emit(cli, &envelope(cli.command.name(), &tol, &outcome))?;
    Ok(if outcome.violation { EXIT_VIOLATION } else { EXIT_OK })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::validation(e.to_string().trim_end());
            println!("{}", render(&err.to_json("renyi-dpi"), Format::Json));
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            println!("{}", render(&err.to_json(cli.command.name()), Format::Json));
            ExitCode::from(err.code)
        }
    }
}
