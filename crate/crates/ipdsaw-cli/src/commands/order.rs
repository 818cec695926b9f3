//! `order`: log-log slope of the excess free energy below β_c across table
//! levels, with the level-doubling drift of |slope − 3/2|.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use ipdsaw::entropy::{feasible_alpha_grid, EntropyCurve};
use ipdsaw::free_energy::{critical_point, transition_order_fit};
use ipdsaw::lattice::ModelKind;

use crate::app::{Ctx, Meta};

use super::ModelArg;

/// A table level `n_max×k_max`, written `64x512` on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Level {
    pub n_max: usize,
    pub k_max: usize,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_max, self.k_max)
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, k) = s
            .split_once('x')
            .ok_or_else(|| format!("expected n_maxxk_max (e.g. 64x512), got {s:?}"))?;
        let n_max = n.parse::<usize>().map_err(|e| e.to_string())?;
        let k_max = k.parse::<usize>().map_err(|e| e.to_string())?;
        if n_max < 2 || k_max < 1 {
            return Err(format!("level {s:?} too small"));
        }
        Ok(Self { n_max, k_max })
    }
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Offsets ε below β_c for the fit.
    #[arg(long = "eps", default_values_t = vec![0.1, 0.15, 0.2, 0.3, 0.4])]
    pub eps: Vec<f64>,
    /// Table levels, coarse → fine; tables are built once at the finest level.
    #[arg(long = "level", default_values_t = vec![
        Level { n_max: 64, k_max: 512 },
        Level { n_max: 128, k_max: 1024 },
    ])]
    pub levels: Vec<Level>,
}

pub fn run(args: &Args, mut ctx: Ctx) -> anyhow::Result<()> {
    let model: ModelKind = args.model.into();
    let finest = *args.levels.last().expect("clap guarantees a default");
    let beta_c = critical_point::<f64>(model).beta_c;

    // The return table rows are exact and level-independent, so every level's
    // curve restricts from one finest-level table per β.
    let mut tables = HashMap::new();
    for &eps in &args.eps {
        let beta = beta_c - eps;
        let table = ctx.table(beta, finest.n_max, finest.k_max)?;
        tables.insert(beta.to_bits(), table);
    }

    let levels: Vec<(usize, usize)> = args.levels.iter().map(|l| (l.n_max, l.k_max)).collect();
    let fit = transition_order_fit(model, &args.eps, &levels, |beta: f64, n_max, k_max| {
        let table = tables.get(&beta.to_bits()).expect("prebuilt above");
        let grid = feasible_alpha_grid(n_max, k_max);
        Ok(EntropyCurve::regularized(table, &grid, n_max, k_max)?)
    })?;

    println!("model {model}  β_c = {:.12}", fit.beta_c);
    let mut csv = String::from("model,n_max,k_max,epsilon,beta,excess,alpha_star\n");
    let drifts = fit.drift();
    for (level, drift) in fit.levels.iter().zip(&drifts) {
        println!(
            "level {}x{}: slope = {:.6}  |slope − 3/2| = {:.6}",
            level.n_max, level.k_max, level.exponent, drift
        );
        for point in &level.points {
            csv.push_str(&format!(
                "{model},{},{},{},{},{},{}\n",
                level.n_max,
                level.k_max,
                point.epsilon,
                fit.beta_c - point.epsilon,
                point.excess,
                point.alpha_star
            ));
        }
    }
    let shrinking = drifts.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    println!(
        "finest slope = {:.6}; drift toward 3/2 {}",
        fit.exponent(),
        if shrinking { "shrinks with table doubling" } else { "DOES NOT shrink" }
    );

    ctx.write_artifact("csv", csv.as_bytes())?;
    ctx.finish(Meta {
        command: "order",
        model: Some(model),
        beta_grid: args.eps.iter().map(|e| beta_c - e).collect(),
        epsilon_grid: args.eps.clone(),
        ..Default::default()
    })?;
    Ok(())
}
