//! `gcurve`: the regularized entropy curve α ↦ g_β(α) as CSV.

use ipdsaw::entropy::{feasible_alpha_grid, EntropyCurve};

use crate::app::{Ctx, Meta};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Self-touching coupling β > 0.
    #[arg(long)]
    pub beta: f64,
    /// Largest walk step count in the table.
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
    /// Largest constrained area in the table.
    #[arg(long, default_value_t = 512)]
    pub k_max: usize,
}

pub fn run(args: &Args, mut ctx: Ctx) -> anyhow::Result<()> {
    let table = ctx.table(args.beta, args.n_max, args.k_max)?;
    let grid = feasible_alpha_grid(args.n_max, args.k_max);
    let curve = EntropyCurve::regularized(&table, &grid, args.n_max, args.k_max)?;

    let points = curve.points();
    let first = points.first().expect("feasible grid is nonempty");
    let last = points.last().expect("feasible grid is nonempty");
    println!(
        "β = {}  table {}×{}  {} grid points",
        args.beta,
        args.n_max,
        args.k_max,
        points.len()
    );
    println!("g(0) = {}", first.g_est);
    println!(
        "g({}/{}) = {}  (largest feasible α)",
        last.alpha.numer(),
        last.alpha.denom(),
        last.g_est
    );

    ctx.write_artifact("csv", curve.to_csv().as_bytes())?;
    ctx.finish(Meta {
        command: "gcurve",
        beta_grid: vec![args.beta],
        alpha_grid: grid
            .iter()
            .map(|a| *a.numer() as f64 / *a.denom() as f64)
            .collect(),
        ..Default::default()
    })?;
    Ok(())
}
