//! `scan`: phase-diagram sweep — excess free energy and phase label over a β
//! grid, parallel across `--jobs` with deterministic output order.

use std::sync::atomic::{AtomicUsize, Ordering};

use ipdsaw::entropy::{feasible_alpha_grid, EntropyCurve};
use ipdsaw::free_energy::{excess_free_energy, Phase};
use ipdsaw::lattice::ModelKind;

use crate::app::{Ctx, Meta};
use crate::tables;

use super::ModelArg;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Grid start.
    #[arg(long)]
    pub beta_from: f64,
    /// Grid end (inclusive).
    #[arg(long)]
    pub beta_to: f64,
    /// Number of grid points.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub steps: u32,
    /// Largest walk step count in the table.
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
    /// Largest constrained area in the table.
    #[arg(long, default_value_t = 512)]
    pub k_max: usize,
}

struct Row {
    beta: f64,
    f: f64,
    f_excess: f64,
    phase: Phase,
    alpha_star: f64,
    checkpoints: Vec<String>,
}

pub fn run(args: &Args, mut ctx: Ctx) -> anyhow::Result<()> {
    let model: ModelKind = args.model.into();
    let steps = args.steps as usize;
    let span = args.beta_to - args.beta_from;
    let betas: Vec<f64> = (0..steps)
        .map(|i| args.beta_from + span * i as f64 / (steps - 1) as f64)
        .collect();

    let compute = |beta: f64| -> anyhow::Result<Row> {
        let mut checkpoints = Vec::new();
        let table = tables::load_or_build(
            beta,
            args.n_max,
            args.k_max,
            ctx.cell_budget,
            &mut checkpoints,
        )?;
        let grid = feasible_alpha_grid(args.n_max, args.k_max);
        let curve = EntropyCurve::regularized(&table, &grid, args.n_max, args.k_max)?;
        let report = excess_free_energy(beta, model, &curve)?;
        Ok(Row {
            beta,
            f: report.point.f,
            f_excess: report.point.f_excess,
            phase: report.point.phase.expect("excess report always labels a phase"),
            alpha_star: report.alpha_star,
            checkpoints,
        })
    };

    let workers = ctx.jobs.clamp(1, betas.len());
    let mut rows: Vec<Option<anyhow::Result<Row>>> = Vec::new();
    rows.resize_with(betas.len(), || None);
    if workers == 1 {
        for (i, &beta) in betas.iter().enumerate() {
            rows[i] = Some(compute(beta));
        }
    } else {
        let next = AtomicUsize::new(0);
        let computed = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    scope.spawn(|| {
                        let mut local = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            if i >= betas.len() {
                                return local;
                            }
                            local.push((i, compute(betas[i])));
                        }
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("scan worker panicked"))
                .collect::<Vec<_>>()
        });
        for (i, row) in computed {
            rows[i] = Some(row);
        }
    }

    let mut csv = String::from("model,beta,f,f_excess,phase,alpha_star\n");
    let mut extended = 0usize;
    let mut collapsed = 0usize;
    for slot in rows {
        let row = slot.expect("every index visited")?;
        ctx.record_checkpoints(row.checkpoints);
        match row.phase {
            Phase::Extended => extended += 1,
            Phase::Collapsed => collapsed += 1,
            Phase::CriticalWindow => {}
        }
        println!(
            "β = {:<8.5} f̃ = {:<12.6e} phase = {}",
            row.beta, row.f_excess, row.phase
        );
        csv.push_str(&format!(
            "{model},{},{},{},{},{}\n",
            row.beta, row.f, row.f_excess, row.phase, row.alpha_star
        ));
    }
    println!(
        "{} points: {extended} extended, {collapsed} collapsed, {} near-critical",
        betas.len(),
        betas.len() - extended - collapsed
    );

    ctx.write_artifact("csv", csv.as_bytes())?;
    ctx.finish(Meta {
        command: "scan",
        model: Some(model),
        beta_grid: betas,
        ..Default::default()
    })?;
    Ok(())
}
