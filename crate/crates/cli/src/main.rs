use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mixclust::experiment::{prepare, run_cell, CellSummary, SweepResult};
use mixclust::mixture_report;
use mixclust::output::{write_outputs, Format};
use mixclust::verify::run_criteria;
use mixclust::{sweep, ExperimentConfig, ModelFile};
use mixclust_core::mixture::{check_non_degeneracy, DEFAULT_RANK_TOL};

#[derive(Parser)]
#[command(
    name = "mixclust",
    version,
    about = "k-means on mixture-model samples: bounds, reductions, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Master seed, overriding the config's.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, overriding the config's.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Also write SVG charts.
    #[arg(long, global = true)]
    plots: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Model file operations.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Print the separability report of a model file as JSON.
    Report { model: PathBuf },
    /// Run the trials of the first N value of a config.
    Run { config: PathBuf },
    /// Run every N value of a config.
    Sweep { config: PathBuf },
    /// Run the oracle and invariant suite.
    Verify {
        /// Include the full-scale study checks (minutes).
        #[arg(long)]
        full: bool,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    /// Check that a model file parses and describes a valid mixture.
    Validate { file: PathBuf },
}

fn load_config(path: &Path, common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output = out.clone();
    }
    Ok(cfg)
}

fn emit(result: &SweepResult, cfg: &ExperimentConfig, common: &Common) -> Result<()> {
    let format = match common.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    for path in write_outputs(&cfg.output, result, format, common.plots)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = &cli.common;
    match cli.command {
        Command::Model {
            action: ModelAction::Validate { file },
        } => {
            let model = ModelFile::load(&file)?.to_model()?;
            let nd = check_non_degeneracy(&model, DEFAULT_RANK_TOL)?;
            println!(
                "{}: valid, K = {}, F = {}, non-degenerate: {} ({})",
                file.display(),
                model.k(),
                model.dim(),
                nd.holds,
                nd.diagnostic
            );
        }
        Command::Report { model } => {
            let m = ModelFile::load(&model)?.to_model()?;
            println!("{}", serde_json::to_string_pretty(&mixture_report(&m)?)?);
        }
        Command::Run { config } => {
            let mut cfg = load_config(&config, common)?;
            cfg.n_grid.truncate(1);
            let prepared = prepare(&cfg)?;
            let records = run_cell(&cfg, &prepared, 0)?;
            let cells = vec![CellSummary::of(cfg.n_grid[0], &records)];
            emit(
                &SweepResult {
                    prepared,
                    records,
                    cells,
                },
                &cfg,
                common,
            )?;
        }
        Command::Sweep { config } => {
            let cfg = load_config(&config, common)?;
            emit(&sweep(&cfg)?, &cfg, common)?;
        }
        Command::Verify { full } => {
            let outcomes = run_criteria(common.seed.unwrap_or(0), full, |o| println!("{o}"))?;
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
