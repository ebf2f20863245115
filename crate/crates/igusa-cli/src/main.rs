//! Command-line front end: reads a problem spec file, runs the engine, and
//! prints the report in text or JSON form.
//!
//! Exit codes: 0 on success, 2 when a degenerate mapping is refused, 3 when
//! an enumeration budget is exceeded, 1 for any other failure.

mod report;
mod run;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use spec::{OutputFormat, ProblemSpec};

#[derive(Parser, Debug)]
#[command(
    name = "igusa",
    about = "Exact local zeta functions of non-degenerate mappings and rational functions via Newton polyhedra"
)]
struct Cli {
    /// Problem specification file (TOML).
    #[arg(long)]
    spec: PathBuf,

    /// Output format: text or json (overrides the spec file).
    #[arg(long)]
    format: Option<String>,

    /// Truncation level for the integration oracle (overrides the spec).
    #[arg(long)]
    oracle_level: Option<u32>,

    /// Rational oracle evaluation point, e.g. "1/4" (overrides the spec).
    #[arg(long)]
    oracle_s0: Option<String>,

    /// Assemble the formula even for a degenerate mapping; the report marks
    /// the result as not certified.
    #[arg(long)]
    override_degenerate: bool,

    /// Seeded fan ordering (overrides the spec's fan ordering).
    #[arg(long)]
    fan_seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {:#}", err.message);
            ExitCode::from(err.code)
        }
    }
}

struct Failure {
    message: anyhow::Error,
    code: u8,
}

impl Failure {
    fn plain(message: anyhow::Error) -> Self {
        Failure { message, code: 1 }
    }
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&cli.spec)
        .map_err(|e| Failure::plain(anyhow::anyhow!("cannot read {:?}: {e}", cli.spec)))?;
    let mut spec = ProblemSpec::from_toml(&text).map_err(Failure::plain)?;

    if let Some(format) = &cli.format {
        spec.format = match format.as_str() {
            "text" => OutputFormat::Text,
            "json" => OutputFormat::Json,
            other => {
                return Err(Failure::plain(anyhow::anyhow!(
                    "unknown output format `{other}`"
                )))
            }
        };
    }
    if let Some(level) = cli.oracle_level {
        spec.oracle_level = level;
    }
    if let Some(s0) = &cli.oracle_s0 {
        spec.oracle_s0 = Some(spec::parse_rational(s0).map_err(Failure::plain)?);
    }
    if cli.override_degenerate {
        spec.override_degenerate = true;
    }
    if let Some(seed) = cli.fan_seed {
        spec.fan_ordering = igusa_core::fan::FanOrdering::Seeded(seed);
    }

    let report = run::run(&spec).map_err(|e| Failure {
        code: e.exit_code() as u8,
        message: anyhow::Error::new(e),
    })?;

    match spec.format {
        OutputFormat::Text => print!("{}", report::to_text(&report)),
        OutputFormat::Json => print!("{}", report::to_json(&report)),
    }
    Ok(())
}
