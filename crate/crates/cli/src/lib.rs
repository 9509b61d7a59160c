//! Library half of the `syn2real` command-line tool.
//!
//! [`execute`] runs one parsed command line: it loads the configuration,
//! dispatches to the command, writes every artifact atomically into the
//! output directory and finishes with a manifest.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;

pub use args::{Cli, Command};
pub use config::RunConfig;
pub use error::{CliError, Result};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "SYN2REAL_OUT";

/// Files written by one run, and the summary to print.
#[derive(Debug)]
pub struct RunOutput {
    pub out_dir: PathBuf,
    pub written: Vec<PathBuf>,
    pub summary: String,
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Fit(_) => "fit",
        Command::FitFull(_) => "fit-full",
        Command::StabilizeD(_) => "stabilize-d",
        Command::Landscape(_) => "landscape",
        Command::Linearize(_) => "linearize",
        Command::Simulate(_) => "simulate",
        Command::Spectrum(_) => "spectrum",
        Command::Rates(_) => "rates",
        Command::Complexity(_) => "complexity",
    }
}

pub fn execute(cli: &Cli) -> Result<RunOutput> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out_dir = cli
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let artifacts = match &cli.command {
        Command::Fit(a) => commands::fit(a, &cfg)?,
        Command::FitFull(a) => commands::fit_full_cmd(a, &cfg)?,
        Command::StabilizeD(a) => commands::stabilize(a, &cfg)?,
        Command::Landscape(a) => commands::landscape_cmd(a, &cfg)?,
        Command::Linearize(a) => commands::linearize_cmd(a, &cfg)?,
        Command::Simulate(a) => commands::simulate(a, &cfg)?,
        Command::Spectrum(a) => commands::spectrum_cmd(a, &cfg)?,
        Command::Rates(a) => commands::rates(a, &cfg)?,
        Command::Complexity(a) => commands::complexity(a, &cfg)?,
    };

    let name = command_name(&cli.command);
    let mut written = Vec::with_capacity(artifacts.files.len() + 1);
    for (file, bytes) in &artifacts.files {
        let path = out_dir.join(file);
        io::write_atomic(&path, bytes)?;
        written.push(path);
    }
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let manifest = json!({
        "command": name,
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": timestamp,
        "config_file": cli.config,
        "config": artifacts.resolved,
        "seeds": artifacts.seeds,
        "outputs": artifacts.files.iter().map(|(f, _)| f).collect::<Vec<_>>(),
    });
    let manifest_path = out_dir.join(format!("{name}.manifest.json"));
    io::write_atomic(&manifest_path, &io::json("manifest", &manifest)?)?;
    written.push(manifest_path);

    Ok(RunOutput {
        out_dir,
        written,
        summary: artifacts.summary,
    })
}
