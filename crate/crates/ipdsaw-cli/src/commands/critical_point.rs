//! `critical-point`: β_c per model by Γ-root bisection, cross-checked
//! against the closed cubic route.

use ipdsaw::free_energy::{critical_point, critical_point_cubic};
use ipdsaw::lattice::ModelKind;

use crate::app::{validation_failure, Ctx, Meta};

use super::ModelArg;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Restrict to one model (default: both).
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
}

pub fn run(args: &Args, mut ctx: Ctx) -> anyhow::Result<()> {
    let models: Vec<ModelKind> = match args.model {
        Some(m) => vec![m.into()],
        None => ModelKind::ALL.to_vec(),
    };
    let mut csv = String::from("model,beta_c_bisection,beta_c_cubic,abs_diff,residual\n");
    let mut problems = Vec::new();
    for &model in &models {
        let root = critical_point::<f64>(model);
        let cubic = critical_point_cubic::<f64>(model);
        let diff = (root.beta_c - cubic.beta_c).abs();
        println!(
            "β_c^{model} = {:.15} (bisection)  {:.15} (cubic)  |Δ| = {diff:e}  |Γ(β_c)−1| = {:e}",
            root.beta_c, cubic.beta_c, root.residual
        );
        if diff > ctx.tol.critical_routes {
            problems.push(format!("{model}: routes disagree by {diff:e}"));
        }
        match model {
            ModelKind::NonUniform => {
                println!("  β_c^nu ≈ 1: offset {:.6}", (root.beta_c - 1.0).abs());
                if (root.beta_c - 1.0).abs() > 0.05 {
                    problems.push(format!("{model}: β_c far from 1"));
                }
            }
            ModelKind::Uniform => {
                println!("  β_c^u ≈ 1.2188: offset {:e}", (root.beta_c - 1.2188).abs());
                if (root.beta_c - 1.2188).abs() > 1e-3 {
                    problems.push(format!("{model}: β_c far from 1.2188"));
                }
            }
        }
        csv.push_str(&format!(
            "{model},{},{},{diff},{}\n",
            root.beta_c, cubic.beta_c, root.residual
        ));
    }
    ctx.write_artifact("csv", csv.as_bytes())?;
    ctx.finish(Meta {
        command: "critical-point",
        model: args.model.map(ModelKind::from),
        ..Default::default()
    })?;
    if !problems.is_empty() {
        return Err(validation_failure(problems.join("; ")));
    }
    Ok(())
}
