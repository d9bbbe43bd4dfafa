//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{parse_config_with, Mode, OutputFormat, Overrides};
use crate::error::LabError;
use crate::runner::run;

#[derive(Debug, Parser)]
#[command(name = "meltdown", version, about = "Register mixing simulations and reaction-data analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration; relative paths inside it resolve against its directory.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed, replacing model.seed (or synth.seed in synth mode).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum Command {
    /// Diagonalize realizations and write profiles, LDOS and diagnostics.
    Simulate,
    /// Sweep J/Δ0 and aggregate width, participation ratio and ⟨r⟩.
    Scan,
    /// Fit temperatures and Legendre expansions to reaction data files.
    Analyze,
    /// Write synthetic reaction data files.
    Synth,
    /// Time-scale and effective-state-count report.
    Report,
}

impl Command {
    pub fn mode(self) -> Mode {
        match self {
            Command::Simulate => Mode::Simulate,
            Command::Scan => Mode::Scan,
            Command::Analyze => Mode::Analyze,
            Command::Synth => Mode::Synth,
            Command::Report => Mode::Report,
        }
    }
}

fn load(cli: &Cli, err: &mut dyn Write) -> Result<crate::config::RunConfig, LabError> {
    let (text, base_dir) = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| LabError::Format {
                path: path.clone(),
                message: format!("cannot read configuration: {e}"),
            })?;
            (text, path.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        None => (String::new(), PathBuf::new()),
    };
    let overrides = Overrides {
        mode: Some(cli.command.mode()),
        seed: cli.seed,
        workers: cli.workers,
        out: cli.out.clone(),
        format: cli.format,
        base_dir: Some(base_dir),
    };
    let parsed = parse_config_with(&text, &overrides)?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(parsed.config)
}

/// Runs the tool with `args` (program name first) and returns the exit
/// status: 0 on success, 1 for invalid configuration or input, 2 for runtime
/// failures.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = load(&cli, err).and_then(|config| run(&config));
    match result {
        Ok(summary) => {
            for f in &summary.files {
                let _ = writeln!(out, "{}", f.display());
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
