//! `hypstab`: tables and reports for hyperbolic simplices, the stability
//! constants and triangulation invariants.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hypstab_core::rng::DEFAULT_SEED;
use hypstab_core::volume::DEFAULT_BUDGET;

use report::Format;

#[derive(Debug, Parser)]
#[command(name = "hypstab", version, about = "Hyperbolic simplex volumes, stability constants and triangulation invariants")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo samples per volume (at least 1000; accepts 1e4).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = parse_samples)]
    pub samples: u64,
    /// Tolerance for hyperboloid and light-cone membership of input points.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

fn parse_samples(s: &str) -> Result<u64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !(v.is_finite() && v.fract() == 0.0) {
        return Err(format!("samples must be a whole number, got {s}"));
    }
    if v < 1000.0 {
        return Err(format!("samples must be at least 1000, got {s}"));
    }
    Ok(v as u64)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dihedral table and the constant C_n for a range of dimensions.
    Constants(commands::ConstantsArgs),
    /// Volume of a simplex given in Klein coordinates, or of the regular ideal simplex.
    Volume(commands::VolumeArgs),
    /// Invariants, fundamental cycles, covers and the inequality dashboard.
    #[command(subcommand)]
    Triangulation(commands::TriangulationCommand),
    /// Vertex-count bounds for covers.
    #[command(subcommand)]
    Bounds(commands::BoundsCommand),
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("HYPSTAB_THREADS") {
        let n: usize = v.parse().with_context(|| format!("HYPSTAB_THREADS must be a positive integer, got {v:?}"))?;
        anyhow::ensure!(n > 0, "HYPSTAB_THREADS must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    configure_threads()?;
    let cfg = &cli.config;
    let report = match &cli.command {
        Command::Constants(a) => commands::constants(cfg, a)?,
        Command::Volume(a) => commands::volume(cfg, a)?,
        Command::Triangulation(c) => commands::triangulation(cfg, c)?,
        Command::Bounds(c) => commands::bounds(c)?,
    };
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(report.ok())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
