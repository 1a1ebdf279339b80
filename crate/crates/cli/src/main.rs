//! `algd`: batch checks for Lie algebroid description files.
//!
//! Exit status: 0 when every verdict passes, 1 when some verdict fails, 2 on input errors.

mod commands;
mod format;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use algebroid::algebroid::ce::weight_shift;
use algebroid::algebroid::SliceMode;
use algebroid::ruth::SamplePolicy;
use clap::{Parser, ValueEnum};
use sha2::{Digest, Sha256};

use commands::{mode_label, Command, Settings};
use format::InputError;
use report::Report;

const DEFAULT_TRUNCATE: u32 = 2;
const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "algd", version, about = "Exact checks for Lie algebroids on polynomial patches")]
struct Cli {
    /// Computation to run.
    #[arg(value_enum)]
    command: Command,
    /// Algebroid description file.
    file: PathBuf,
    /// Work on the exact slice of this weight.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "truncate")]
    weight: Option<i64>,
    /// Truncation order K for coefficients and jets.
    #[arg(long, visible_alias = "K")]
    truncate: Option<u32>,
    /// Seed for sample points and random probes.
    #[arg(long)]
    seed: Option<u64>,
    /// Reject brackets that are not graded-antisymmetric (default).
    #[arg(long, conflicts_with = "lenient")]
    strict: bool,
    /// Antisymmetrize brackets with a warning instead of rejecting them.
    #[arg(long)]
    lenient: bool,
    /// Lowest cohomological degree reported.
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<i32>,
    /// Highest cohomological degree reported.
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<i32>,
    /// Random sample points besides the origin.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(cli: &Cli) -> Result<Report, InputError> {
    let bytes = std::fs::read(&cli.file).map_err(|e| InputError::Io {
        path: cli.file.display().to_string(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| InputError::Invalid("input is not valid UTF-8".into()))?;
    let file = format::parse(&text, !cli.lenient)?;
    let opts = &file.options;
    if cli.weight.is_none() && cli.truncate.is_none() && opts.weight.is_some() && opts.truncate.is_some() {
        return Err(InputError::Invalid("[options] sets both weight and truncate".into()));
    }
    let truncate = cli.truncate.or(opts.truncate).unwrap_or(DEFAULT_TRUNCATE);
    let weight = if cli.truncate.is_some() { cli.weight } else { cli.weight.or(opts.weight) };
    let explicit_truncate = cli.truncate.is_some() || (cli.weight.is_none() && opts.truncate.is_some());
    let mode = match weight {
        Some(w) => SliceMode::Weight(w),
        None if !explicit_truncate && weight_shift(&file.algebroid).is_ok() => SliceMode::Weight(0),
        None => SliceMode::Truncate(truncate),
    };
    let seed = cli.seed.or(opts.seed).unwrap_or(DEFAULT_SEED);
    let settings = Settings {
        mode,
        truncate,
        policy: SamplePolicy {
            seed,
            extra_points: cli.points.or(opts.points),
        },
        lo: cli.lo.or(opts.lo),
        hi: cli.hi.or(opts.hi),
        arity: opts.arity.unwrap_or(4),
    };
    let outcome = commands::run(cli.command, &file, &settings)?;
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok(Report {
        command: cli.command.name().to_string(),
        input_digest: digest,
        seed,
        truncate,
        mode: mode_label(mode),
        verdicts: outcome.verdicts,
        tables: outcome.tables,
        caveats: outcome.caveats,
        warnings: file.warnings,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("algd: {}: {e}", cli.file.display());
            return ExitCode::from(2);
        }
    };
    let rendered = match cli.format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Machine => report.to_json(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("algd: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
