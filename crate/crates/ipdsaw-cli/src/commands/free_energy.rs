//! `free-energy`: the variational sweep over the horizontal density and the
//! resulting excess free energy at one β.

use ipdsaw::entropy::{feasible_alpha_grid, EntropyCurve};
use ipdsaw::free_energy::{excess_free_energy, phi, variational_objective};
use ipdsaw::lattice::ModelKind;

use crate::app::{Ctx, Meta};

use super::ModelArg;

/// Sweep resolution over the density interval [0, 1].
const SWEEP_POINTS: usize = 512;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Self-touching coupling β > 0.
    #[arg(long)]
    pub beta: f64,
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Largest walk step count in the table.
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
    /// Largest constrained area in the table.
    #[arg(long, default_value_t = 512)]
    pub k_max: usize,
}

pub fn run(args: &Args, mut ctx: Ctx) -> anyhow::Result<()> {
    let model: ModelKind = args.model.into();
    let table = ctx.table(args.beta, args.n_max, args.k_max)?;
    let grid = feasible_alpha_grid(args.n_max, args.k_max);
    let curve = EntropyCurve::regularized(&table, &grid, args.n_max, args.k_max)?;
    let report = excess_free_energy(args.beta, model, &curve)?;

    let mut csv = String::from("alpha,objective\n");
    for i in 0..=SWEEP_POINTS {
        let alpha = i as f64 / SWEEP_POINTS as f64;
        let value = variational_objective(alpha, args.beta, model, &curve)?;
        csv.push_str(&format!("{alpha},{value}\n"));
    }

    let point = report.point;
    println!("model {model}  β = {}  table {}×{}", args.beta, args.n_max, args.k_max);
    println!("φ (collapsed baseline) = {}", phi(model, args.beta));
    println!("f̃ (excess)             = {}", point.f_excess);
    println!("f = φ + f̃              = {}", point.f);
    println!(
        "α* = {}  (argmax diameter {:e})",
        report.alpha_star, report.argmax_diameter
    );
    if let Some(phase) = point.phase {
        println!("phase: {phase}");
    }

    ctx.write_artifact("csv", csv.as_bytes())?;
    ctx.finish(Meta {
        command: "free-energy",
        model: Some(model),
        beta_grid: vec![args.beta],
        ..Default::default()
    })?;
    Ok(())
}
