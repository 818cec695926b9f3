//! `ipdsaw` — reproducible command-line runs over the IPDSAW library:
//! partition functions by two routes, entropy curves, free-energy sweeps and
//! phase scans, critical points, transition-order fits, exact Boltzmann
//! sampling, SVG figures, and a self-test gate.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 64
//! resource-budget refusal.

mod app;
mod commands;
mod config;
mod manifest;
mod svg;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ipdsaw::sampler::SamplerError;
use ipdsaw::walk::{WalkError, DEFAULT_CELL_BUDGET};

use app::Ctx;

#[derive(Parser)]
#[command(
    name = "ipdsaw",
    version,
    about = "Exact-computation laboratory for the 1+1-dimensional IPDSAW polymer model"
)]
struct Cli {
    /// TOML config with a [tolerances] section; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Bound on worker threads for grid commands.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Directory for data artifacts and the run manifest; stdout-only if absent.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Artifact filename prefix (default: the subcommand name).
    #[arg(long, global = true, value_name = "STEM")]
    prefix: Option<String>,
    /// Cap on DP table cells; larger requests are refused with exit 64.
    #[arg(long, global = true, default_value_t = DEFAULT_CELL_BUDGET)]
    cell_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// log Z by representation and brute force, with agreement gate.
    Partition(commands::partition::Args),
    /// Regularized entropy curve g_β as CSV.
    Gcurve(commands::gcurve::Args),
    /// Variational sweep and excess free energy at one β.
    FreeEnergy(commands::free_energy::Args),
    /// β_c per model, bisection vs cubic route.
    CriticalPoint(commands::critical_point::Args),
    /// Transition-order fit of f̃(β_c − ε) across table levels.
    Order(commands::order::Args),
    /// Phase-diagram sweep over a β grid.
    Scan(commands::scan::Args),
    /// Exact Boltzmann path samples as JSON lines.
    Sample(commands::sample::Args),
    /// SVG figure from a sample dump.
    Render(commands::render::Args),
    /// Fast invariant sweep with machine-readable pass list.
    Selftest(commands::selftest::Args),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Partition(_) => "partition",
            Command::Gcurve(_) => "gcurve",
            Command::FreeEnergy(_) => "free-energy",
            Command::CriticalPoint(_) => "critical-point",
            Command::Order(_) => "order",
            Command::Scan(_) => "scan",
            Command::Sample(_) => "sample",
            Command::Render(_) => "render",
            Command::Selftest(_) => "selftest",
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match dispatch(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn dispatch(cli: Cli, argv: Vec<String>) -> anyhow::Result<()> {
    let tolerances = config::load(cli.config.as_deref())?;
    if let Command::Render(args) = &cli.command {
        return commands::render::run(args, argv, tolerances);
    }
    let ctx = Ctx::new(
        tolerances,
        cli.jobs as usize,
        cli.cell_budget,
        cli.out,
        cli.prefix,
        cli.command.name(),
        argv,
    );
    match &cli.command {
        Command::Partition(args) => commands::partition::run(args, ctx),
        Command::Gcurve(args) => commands::gcurve::run(args, ctx),
        Command::FreeEnergy(args) => commands::free_energy::run(args, ctx),
        Command::CriticalPoint(args) => commands::critical_point::run(args, ctx),
        Command::Order(args) => commands::order::run(args, ctx),
        Command::Scan(args) => commands::scan::run(args, ctx),
        Command::Sample(args) => commands::sample::run(args, ctx),
        Command::Selftest(args) => commands::selftest::run(args, ctx),
        Command::Render(_) => unreachable!("handled above"),
    }
}

/// 64 for table/length budget refusals, 1 for everything else that survives
/// parsing (clap already exits 2 on usage errors).
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(walk) = cause.downcast_ref::<WalkError>() {
            if matches!(walk, WalkError::BudgetExceeded { .. }) {
                return 64;
            }
        }
        if let Some(sampler) = cause.downcast_ref::<SamplerError>() {
            if matches!(sampler, SamplerError::LengthCap { .. }) {
                return 64;
            }
        }
    }
    1
}
