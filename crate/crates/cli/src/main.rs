mod commands;
mod config;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use crate::config::{parse_range, Cli, Command, Common, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] quatlift::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Classes(c) | Command::Theta(c) | Command::Eigen(c) | Command::Gross(c) | Command::Verify(c) => c,
        Command::Brandt { common, .. } => common,
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let args = common(&cli.command);
    let cfg = RunConfig::from_args(args)?;
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let artifact = match &cli.command {
        Command::Classes(_) => commands::classes(&cfg)?,
        Command::Brandt { m, .. } => commands::brandt(&cfg, parse_range(m)?)?,
        Command::Theta(_) => commands::theta(&cfg)?,
        Command::Eigen(_) => commands::eigen(&cfg)?,
        Command::Gross(_) => commands::gross(&cfg)?,
        Command::Verify(_) => commands::verify(&cfg)?,
    };
    match &args.out {
        Some(path) => std::fs::write(path, &artifact.body)?,
        None => std::io::stdout().lock().write_all(artifact.body.as_bytes())?,
    }
    Ok(!artifact.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("quatlift: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
