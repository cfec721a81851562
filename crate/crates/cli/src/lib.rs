//! Library side of the `nctrap` executable: config handling, subcommands and
//! output emission.

pub mod commands;
pub mod config;
pub mod error;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use config::{load_value, Format, RunConfig};
use error::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "nctrap",
    version,
    about = "Trapped-ion spectra and noncommutative-space signals"
)]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a config field by dotted path, e.g. trap.B=0.25 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub sets: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Effective parameters, levels and angular-momentum signals.
    Spectra,
    /// Truncated Fock-space oracle.
    Verify,
    /// Exact constraint-reduction replay.
    Dirac,
    /// Experimental sensitivity and rate plan.
    Sensitivity,
    /// One spectra row per value of a swept config path.
    Sweep,
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, body: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let value = load_value(cli.config.as_deref(), &cli.sets)?;
    let cfg = RunConfig::from_value(&value)?;
    let format = cli.format.or(cfg.output.format);
    let json = format.unwrap_or(Format::Json);
    let out = match cli.command {
        Command::Spectra => commands::spectra(&cfg, json)?,
        Command::Verify => commands::verify(&cfg, json)?,
        Command::Dirac => commands::dirac(format)?,
        Command::Sensitivity => commands::sensitivity_cmd(&cfg, json)?,
        Command::Sweep => commands::sweep(&value, &cfg, json)?,
    };
    match cli.output.as_ref().or(cfg.output.path.as_ref()) {
        Some(path) => write_atomic(path, &out.body)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    match out.after {
        Some(f) => Err(f),
        None => Ok(()),
    }
}
