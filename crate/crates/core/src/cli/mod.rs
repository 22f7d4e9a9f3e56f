//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 tolerance failure, 2 configuration error,
//! 3 numerical failure.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use serde::Serialize;

pub use config::{Command, Format, RunConfig, SCHEMA_VERSION};

use crate::error::Error;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "PBK_THREADS";

#[derive(Debug, Parser)]
#[command(name = "pbk", version, about = "Kloosterman sums, Bessel transforms and trace-formula geometric sides")]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Command to run; overrides the configuration.
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Worker threads.
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_)
        | Error::Precondition(_)
        | Error::Config(_)
        | Error::UnsupportedVariant(_)
        | Error::Io(_) => EXIT_CONFIG,
        Error::Budget { .. }
        | Error::DepthInstability { .. }
        | Error::NonConvergence { .. }
        | Error::IllConditioned { .. }
        | Error::NonFinite(_) => EXIT_NUMERICAL,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Precondition(_) => "precondition",
        Error::Config(_) => "config",
        Error::Budget { .. } => "budget",
        Error::DepthInstability { .. } => "depth-instability",
        Error::NonConvergence { .. } => "non-convergence",
        Error::UnsupportedVariant(_) => "unsupported-variant",
        Error::IllConditioned { .. } => "ill-conditioned",
        Error::NonFinite(_) => "non-finite",
        Error::Io(_) => "io",
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    schema_version: u32,
    error: &'a str,
    message: String,
    exit_code: i32,
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, Error> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::new(),
    };
    if let Some(c) = cli.command {
        cfg.command = Some(c);
    }
    let command = cfg
        .command
        .ok_or_else(|| Error::Config("no command given (use --command or the config's \"command\")".into()))?;
    let threads = cli.threads.or(cfg.threads);
    if threads == Some(0) {
        return Err(Error::Config("threads must be at least 1".into()));
    }
    let format = cli.format.or(cfg.format).unwrap_or_default();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| commands::dispatch(command, &cfg, format))?;
    match cli.out.clone().or(cfg.output.clone()) {
        Some(path) => std::fs::write(&path, &outcome.text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => out
            .write_all(outcome.text.as_bytes())
            .map_err(|e| Error::Io(e.to_string()))?,
    }
    Ok(outcome.pass)
}

/// Run the CLI with explicit streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_TOLERANCE,
        Err(e) => {
            let code = exit_code(&e);
            let record = ErrorRecord {
                schema_version: SCHEMA_VERSION,
                error: error_kind(&e),
                message: e.to_string(),
                exit_code: code,
            };
            let _ = writeln!(err, "{}", serde_json::to_string(&record).expect("serialisable"));
            code
        }
    }
}

/// Run the CLI on the process arguments and standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
