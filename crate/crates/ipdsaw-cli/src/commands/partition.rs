//! `partition`: log Z by the column representation and, within reach, by
//! brute-force enumeration, with their agreement gate.

use ipdsaw::lattice::{partition_brute_force, LatticeError, ModelKind, BRUTE_FORCE_CUTOFF};
use ipdsaw::walk::partition_representation;

use crate::app::{validation_failure, Ctx, Meta};

use super::ModelArg;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Total path length L.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub length: u32,
    /// Self-touching coupling β > 0.
    #[arg(long)]
    pub beta: f64,
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Override the route-agreement tolerance for this run.
    #[arg(long)]
    pub tol: Option<f64>,
}

pub fn run(args: &Args, mut ctx: Ctx) -> anyhow::Result<()> {
    let length = args.length as usize;
    let model: ModelKind = args.model.into();
    let tol = args.tol.unwrap_or(ctx.tol.representation);

    let table = ctx.table(args.beta, length + 1, (length - 1).max(1))?;
    let repr = partition_representation(length, args.beta, model, &table)?;
    let brute = match partition_brute_force::<f64>(length, args.beta, model) {
        Ok(value) => Some(value),
        Err(LatticeError::BruteForceCutoff { .. }) => None,
        Err(err) => return Err(err.into()),
    };

    println!("model {model}  β = {}  L = {length}", args.beta);
    println!("log Z (representation) = {repr}");
    let (brute_cell, diff_cell, agree) = match brute {
        Some(value) => {
            let diff = (repr - value).abs();
            println!("log Z (brute force)    = {value}");
            println!("|Δ| = {diff:e}  (tolerance {tol:e})");
            (value.to_string(), diff.to_string(), diff <= tol)
        }
        None => {
            println!("log Z (brute force)    = skipped (L > {BRUTE_FORCE_CUTOFF})");
            (String::new(), String::new(), true)
        }
    };
    if agree && brute.is_some() {
        println!("agreement: ok");
    }

    let csv = format!(
        "model,beta,length,log_z_representation,log_z_brute,abs_diff\n\
         {model},{},{length},{repr},{brute_cell},{diff_cell}\n",
        args.beta
    );
    ctx.write_artifact("csv", csv.as_bytes())?;
    ctx.finish(Meta {
        command: "partition",
        model: Some(model),
        beta_grid: vec![args.beta],
        length_grid: vec![length],
        ..Default::default()
    })?;
    if !agree {
        return Err(validation_failure(format!(
            "partition routes disagree beyond {tol:e} at L={length}, β={}",
            args.beta
        )));
    }
    Ok(())
}
