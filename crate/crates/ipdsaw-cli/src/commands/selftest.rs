//! `selftest`: fast end-to-end invariant sweep with a machine-readable pass
//! list (JSON lines). Exit 0 only when every check passes.

use ipdsaw::entropy::{feasible_alpha_grid, g_finite, Alpha, EntropyCurve};
use ipdsaw::free_energy::{
    collapsed_ansatz_log_lower_bound, critical_point, critical_point_cubic,
    finite_size_free_energy,
};
use ipdsaw::lattice::{partition_brute_force, path_counts_up_to, ModelKind};
use ipdsaw::sampler::sample_path;
use ipdsaw::walk::{partition_representation, GeometricLaw, ReturnTable, TableSpec};
use serde_json::json;

use crate::app::{validation_failure, Ctx, Meta};
use crate::config::Tolerances;

#[derive(clap::Args, Debug)]
pub struct Args {}

type Check = (&'static str, fn(&Tolerances) -> Result<String, String>);

const CHECKS: &[Check] = &[
    ("representation-identity", representation_identity),
    ("exact-small-cases", exact_small_cases),
    ("critical-points", critical_points),
    ("growth-constant", growth_constant),
    ("collapsed-lower-bounds", collapsed_lower_bounds),
    ("finite-size-upper-bound", finite_size_upper_bound),
    ("sampler-consistency", sampler_consistency),
    ("entropy-shape", entropy_shape),
];

pub fn run(_args: &Args, mut ctx: Ctx) -> anyhow::Result<()> {
    let mut lines = String::new();
    let mut failures = Vec::new();
    for (name, check) in CHECKS {
        let (pass, detail) = match check(&ctx.tol) {
            Ok(detail) => (true, detail),
            Err(detail) => (false, detail),
        };
        let line = json!({ "check": name, "pass": pass, "detail": detail }).to_string();
        println!("{line}");
        lines.push_str(&line);
        lines.push('\n');
        if !pass {
            failures.push(*name);
        }
    }
    eprintln!(
        "selftest: {}/{} checks passed",
        CHECKS.len() - failures.len(),
        CHECKS.len()
    );
    ctx.write_artifact("jsonl", lines.as_bytes())?;
    ctx.finish(Meta { command: "selftest", ..Default::default() })?;
    if !failures.is_empty() {
        return Err(validation_failure(format!("failed checks: {}", failures.join(", "))));
    }
    Ok(())
}

fn table(beta: f64, n_max: usize, k_max: usize) -> Result<ReturnTable<f64>, String> {
    let law = GeometricLaw::new(beta).map_err(|e| e.to_string())?;
    ReturnTable::build(law, TableSpec::new(n_max, k_max)).map_err(|e| e.to_string())
}

fn representation_identity(tol: &Tolerances) -> Result<String, String> {
    let mut worst = 0.0f64;
    for &beta in &[0.5, 1.0, 2.0] {
        let t = table(beta, 11, 9)?;
        for length in 2..=10 {
            for model in ModelKind::ALL {
                let brute =
                    partition_brute_force::<f64>(length, beta, model).map_err(|e| e.to_string())?;
                let repr = partition_representation(length, beta, model, &t)
                    .map_err(|e| e.to_string())?;
                worst = worst.max((brute - repr).abs());
            }
        }
    }
    let detail = format!("max |Δ log Z| = {worst:.2e} over L ≤ 10");
    if worst <= tol.representation { Ok(detail) } else { Err(detail) }
}

fn exact_small_cases(tol: &Tolerances) -> Result<String, String> {
    let mut worst = 0.0f64;
    for &beta in &[0.5, 1.0, 2.0] {
        let t = table(beta, 11, 9)?;
        let z_u = partition_representation(2, beta, ModelKind::Uniform, &t)
            .map_err(|e| e.to_string())?;
        let z_nu = partition_representation(2, beta, ModelKind::NonUniform, &t)
            .map_err(|e| e.to_string())?;
        worst = worst.max(z_u.abs());
        worst = worst.max((z_nu - (4.0f64 / 9.0).ln()).abs());
        let log_c = GeometricLaw::new(beta).unwrap().log_c_beta();
        for n in 1..=10 {
            let lp = t.constrained_return_prob(n, 0).map_err(|e| e.to_string())?;
            worst = worst.max((lp + n as f64 * log_c).abs());
        }
    }
    let detail = format!("max deviation = {worst:.2e} (Z_2 values and zero-area law)");
    if worst <= tol.g_zero.max(1e-12) { Ok(detail) } else { Err(detail) }
}

fn critical_points(tol: &Tolerances) -> Result<String, String> {
    let mut problems = Vec::new();
    for model in ModelKind::ALL {
        let root = critical_point::<f64>(model);
        let cubic = critical_point_cubic::<f64>(model);
        if (root.beta_c - cubic.beta_c).abs() > tol.critical_routes {
            problems.push(format!("{model}: route disagreement"));
        }
    }
    let nu = critical_point::<f64>(ModelKind::NonUniform).beta_c;
    let u = critical_point::<f64>(ModelKind::Uniform).beta_c;
    if (nu - 1.0).abs() > 0.05 {
        problems.push("β_c^nu far from 1".to_string());
    }
    if (u - 1.2188).abs() > 1e-3 {
        problems.push("β_c^u far from 1.2188".to_string());
    }
    let detail = format!("β_c^nu = {nu:.9}, β_c^u = {u:.9}");
    if problems.is_empty() { Ok(detail) } else { Err(problems.join("; ")) }
}

fn growth_constant(tol: &Tolerances) -> Result<String, String> {
    let counts = path_counts_up_to(201);
    let ratio = (counts[200].log_count() - counts[199].log_count()).exp();
    let diff = (ratio - (1.0 + 2.0f64.sqrt())).abs();
    let detail = format!("|𝒲_201|/|𝒲_200| = {ratio:.9}, |Δ(1+√2)| = {diff:.1e}");
    if diff <= tol.growth { Ok(detail) } else { Err(detail) }
}

fn collapsed_lower_bounds(_tol: &Tolerances) -> Result<String, String> {
    let mut worst = f64::INFINITY;
    for &beta in &[1.0, 2.0] {
        let t = table(beta, 26, 24)?;
        for &length in &[16usize, 25] {
            for model in ModelKind::ALL {
                let log_z = partition_representation(length, beta, model, &t)
                    .map_err(|e| e.to_string())?;
                let bound = collapsed_ansatz_log_lower_bound(model, length, beta);
                worst = worst.min(log_z - bound);
            }
        }
    }
    let detail = format!("min (log Z − log bound) = {worst:.4}");
    if worst >= -1e-12 { Ok(detail) } else { Err(detail) }
}

fn finite_size_upper_bound(_tol: &Tolerances) -> Result<String, String> {
    let mut worst = f64::INFINITY;
    for &beta in &[0.5, 1.5, 3.0] {
        let t = table(beta, 33, 31)?;
        for &length in &[8usize, 32] {
            for model in ModelKind::ALL {
                let point = finite_size_free_energy(length, beta, model, &t)
                    .map_err(|e| e.to_string())?;
                worst = worst.min(beta - point.f);
            }
        }
    }
    let detail = format!("min (β − f_L) = {worst:.4}");
    if worst >= -1e-12 { Ok(detail) } else { Err(detail) }
}

fn sampler_consistency(_tol: &Tolerances) -> Result<String, String> {
    let a = sample_path::<f64>(10, 1.0, ModelKind::NonUniform, 5).map_err(|e| e.to_string())?;
    let b = sample_path::<f64>(10, 1.0, ModelKind::NonUniform, 5).map_err(|e| e.to_string())?;
    if a != b {
        return Err("same seed produced different samples".to_string());
    }
    if a.touches != a.stretches.hamiltonian() {
        return Err("touches disagree with Hamiltonian recomputation".to_string());
    }
    if a.horizontal_extension != a.stretches.horizontal_extension()
        || a.length != a.stretches.total_length()
    {
        return Err("sample geometry fields disagree with the stretch vector".to_string());
    }
    Ok(format!(
        "deterministic at seed 5; N = {}, touches = {}",
        a.horizontal_extension, a.touches
    ))
}

fn entropy_shape(tol: &Tolerances) -> Result<String, String> {
    let t = table(1.0, 32, 128)?;
    let g0 = g_finite(&t, 32, Alpha::from_integer(0)).map_err(|e| e.to_string())?;
    let log_c = GeometricLaw::new(1.0).unwrap().log_c_beta();
    if (g0 + log_c).abs() > tol.g_zero {
        return Err(format!("|g(0) + log c_β| = {:.2e}", (g0 + log_c).abs()));
    }
    let grid = feasible_alpha_grid(32, 128);
    let curve =
        EntropyCurve::regularized(&t, &grid, 32, 128).map_err(|e| e.to_string())?;
    let pts = curve.points();
    for w in pts.windows(2) {
        if w[0].g_est > 1e-15 || w[1].g_est < w[0].g_est - 1e-12 {
            return Err("curve not nonpositive/nondecreasing".to_string());
        }
    }
    for w in pts.windows(3) {
        let (x0, x2) = (
            *w[0].alpha.numer() as f64 / *w[0].alpha.denom() as f64,
            *w[2].alpha.numer() as f64 / *w[2].alpha.denom() as f64,
        );
        if curve.value_at(0.5 * (x0 + x2)) < 0.5 * (w[0].g_est + w[2].g_est) - 1e-12 {
            return Err("curve not midpoint-concave".to_string());
        }
    }
    Ok(format!("{} grid points: nonpositive, monotone, concave", pts.len()))
}
