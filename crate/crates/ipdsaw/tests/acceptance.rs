//! Acceptance gate: one test per criterion, each emitting a single
//! `criterion-N …: PASS/FAIL (detail)` line. Run with
//! `cargo test -p ipdsaw --test acceptance -- --show-output` to see the
//! verdict lines for passing criteria as well.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use ipdsaw::entropy::{
    admissible_steps, asymptotic_decay_fit, feasible_alpha_grid, g_area_leq, g_estimate, g_finite,
    integral_area, Alpha, EntropyCurve,
};
use ipdsaw::free_energy::{
    collapsed_ansatz_log_lower_bound, critical_point, critical_point_cubic, excess_free_energy,
    finite_size_free_energy, transition_order_fit,
};
use ipdsaw::lattice::{
    enumerate_stretch_configs, partition_brute_force, path_counts_up_to, ModelKind, StretchConfig,
};
use ipdsaw::sampler::{extension_scaling_experiment, Sampler};
use ipdsaw::scalar::log_sum_exp;
use ipdsaw::walk::{partition_representation, GeometricLaw, LayerTable, ReturnTable, TableSpec};

type Table = ReturnTable<f64>;

/// Return tables are exact and β-keyed, so criteria share them freely.
fn cached_table(beta: f64, n_max: usize, k_max: usize) -> Arc<Table> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize, usize), Arc<Table>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (beta.to_bits(), n_max, k_max);
    if let Some(table) = cache.lock().unwrap().get(&key) {
        return Arc::clone(table);
    }
    let law = GeometricLaw::new(beta).unwrap();
    let table = Arc::new(Table::build(law, TableSpec::new(n_max, k_max)).unwrap());
    cache.lock().unwrap().insert(key, Arc::clone(&table));
    table
}

fn curve_at(table: &Table, n_max: usize, k_max: usize) -> EntropyCurve<f64> {
    let grid = feasible_alpha_grid(n_max, k_max);
    EntropyCurve::regularized(table, &grid, n_max, k_max).unwrap()
}

fn verdict(name: &str, pass: bool, detail: &str) {
    println!("{name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: FAIL ({detail})");
}

fn alpha_to_f64(alpha: Alpha) -> f64 {
    *alpha.numer() as f64 / *alpha.denom() as f64
}

const BETA_GRID: [f64; 6] = [0.3, 0.5, 1.0, 1.5, 2.0, 3.0];

#[test]
fn criterion_01_representation_identity() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &beta in &BETA_GRID {
        let table = cached_table(beta, 13, 12);
        for length in 2..=12 {
            for model in ModelKind::ALL {
                let brute = partition_brute_force::<f64>(length, beta, model).unwrap();
                let repr = partition_representation(length, beta, model, &table).unwrap();
                worst = worst.max((brute - repr).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "criterion-1 representation identity",
        worst <= 1e-10 && elapsed.as_secs() < 30,
        &format!("max |Δ log Z| = {worst:.2e} over L ≤ 12 × 6 β × 2 models, {elapsed:.1?}"),
    );
}

#[test]
fn criterion_02_exact_small_cases() {
    let mut worst_u = 0.0f64;
    let mut worst_nu = 0.0f64;
    let mut worst_zero = 0.0f64;
    let nu_target = (4.0f64 / 9.0).ln();
    for &beta in &BETA_GRID {
        let table = cached_table(beta, 13, 12);
        let z_u = partition_representation(2, beta, ModelKind::Uniform, &table).unwrap();
        let z_nu = partition_representation(2, beta, ModelKind::NonUniform, &table).unwrap();
        worst_u = worst_u.max(z_u.abs());
        worst_nu = worst_nu.max((z_nu - nu_target).abs());
        let log_c = GeometricLaw::new(beta).unwrap().log_c_beta();
        for n in 1..=10 {
            let lp = table.constrained_return_prob(n, 0).unwrap();
            worst_zero = worst_zero.max((lp + n as f64 * log_c).abs());
        }
    }
    verdict(
        "criterion-2 exact small cases",
        worst_u <= 1e-12 && worst_nu <= 1e-12 && worst_zero <= 1e-12,
        &format!(
            "|log Z^u_2| ≤ {worst_u:.1e}, |log Z^nu_2 − log 4/9| ≤ {worst_nu:.1e}, \
             |log 𝐏(𝒱_N,0) + N log c_β| ≤ {worst_zero:.1e}"
        ),
    );
}

#[test]
fn criterion_03_critical_points() {
    let start = Instant::now();
    let nu_root = critical_point::<f64>(ModelKind::NonUniform);
    let nu_cubic = critical_point_cubic::<f64>(ModelKind::NonUniform);
    let u_root = critical_point::<f64>(ModelKind::Uniform);
    let u_cubic = critical_point_cubic::<f64>(ModelKind::Uniform);
    let nu_agree = (nu_root.beta_c - nu_cubic.beta_c).abs();
    let u_agree = (u_root.beta_c - u_cubic.beta_c).abs();
    let nu_near_one = (nu_root.beta_c - 1.0).abs();
    let u_ref = (u_root.beta_c - 1.2188).abs();
    let elapsed = start.elapsed();
    verdict(
        "criterion-3 critical points",
        nu_agree <= 1e-10
            && u_agree <= 1e-10
            && nu_near_one <= 0.05
            && u_ref <= 1e-3
            && elapsed.as_secs() < 1,
        &format!(
            "β_c^nu = {:.12} (routes agree to {nu_agree:.1e}), β_c^u = {:.12} \
             (|Δ1.2188| = {u_ref:.1e}), {elapsed:.1?}",
            nu_root.beta_c, u_root.beta_c
        ),
    );
}

#[test]
fn criterion_04_phase_dichotomy() {
    let start = Instant::now();
    let mut max_above = f64::NEG_INFINITY;
    let mut min_below = f64::INFINITY;
    for model in ModelKind::ALL {
        let beta_c = critical_point::<f64>(model).beta_c;
        for i in 1..=20 {
            let beta = beta_c + 0.1 * i as f64;
            let table = cached_table(beta, 64, 512);
            let report = excess_free_energy(beta, model, &curve_at(&table, 64, 512)).unwrap();
            max_above = max_above.max(report.point.f_excess);
        }
        for i in 1..=5 {
            let beta = beta_c - 0.1 * i as f64;
            let table = cached_table(beta, 128, 1024);
            let report = excess_free_energy(beta, model, &curve_at(&table, 128, 1024)).unwrap();
            min_below = min_below.min(report.point.f_excess);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "criterion-4 phase dichotomy",
        max_above <= 1e-9 && min_below >= 1e-6,
        &format!("max f̃ above β_c = {max_above:.1e}, min f̃ below = {min_below:.2e}, {elapsed:.0?}"),
    );
}

#[test]
fn criterion_05_transition_order() {
    let start = Instant::now();
    let eps_grid = [0.1, 0.15, 0.2, 0.3, 0.4];
    let levels = [(64, 512), (128, 1024)];
    let mut pass = true;
    let mut details = Vec::new();
    for model in ModelKind::ALL {
        let fit = transition_order_fit(model, &eps_grid, &levels, |beta, n_max, k_max| {
            let table = cached_table(beta, 128, 1024);
            Ok(curve_at(&table, n_max, k_max))
        })
        .unwrap();
        let slopes: Vec<f64> = fit.levels.iter().map(|l| l.exponent).collect();
        let drifts = fit.drift();
        let in_bracket = (1.3..=1.7).contains(&fit.exponent());
        let drift_shrinks = drifts.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        pass &= in_bracket && drift_shrinks;
        details.push(format!(
            "{model}: slope {:.4}→{:.4}, |slope−1.5| drift {:.4}→{:.4}",
            slopes[0], slopes[1], drifts[0], drifts[1]
        ));
    }
    let elapsed = start.elapsed();
    verdict(
        "criterion-5 transition order",
        pass,
        &format!("{}, {elapsed:.0?}", details.join("; ")),
    );
}

#[test]
fn criterion_06_entropy_function() {
    // g(0) = −log c_β exactly, per row and through the estimator.
    let mut worst_zero = 0.0f64;
    for &beta in &[0.5, 1.0, 2.0] {
        let table = cached_table(beta, 64, 512);
        let log_c = GeometricLaw::new(beta).unwrap().log_c_beta();
        for n in 2..=64 {
            let g = g_finite(&table, n, Alpha::from_integer(0)).unwrap();
            worst_zero = worst_zero.max((g + log_c).abs());
        }
        let est = g_estimate(&table, Alpha::from_integer(0), 64).unwrap();
        worst_zero = worst_zero.max((est.value + log_c).abs());
    }
    let zero_ok = worst_zero <= 1e-12;

    // Shape on the full feasible grid: nonpositive, nondecreasing, midpoint-concave.
    let mut shape_ok = true;
    for &beta in &[0.5, 1.0, 2.0] {
        let table = cached_table(beta, 64, 512);
        let curve = curve_at(&table, 64, 512);
        let pts = curve.points();
        for w in pts.windows(2) {
            shape_ok &= w[0].g_est <= 1e-15 && w[1].g_est <= 1e-15;
            shape_ok &= w[1].g_est >= w[0].g_est - 1e-12;
            shape_ok &= w[1].g_est >= w[1].g_finite - 1e-12;
        }
        for i in 0..pts.len() {
            for j in (i + 2)..pts.len() {
                let (xi, xj) = (alpha_to_f64(pts[i].alpha), alpha_to_f64(pts[j].alpha));
                let mid = curve.value_at(0.5 * (xi + xj));
                shape_ok &= mid >= 0.5 * (pts[i].g_est + pts[j].g_est) - 1e-12;
            }
        }
    }

    // Sandwich at β = 1 for every admissible N ≤ 48 and α ∈ {1/2, 1, 2}.
    let table = cached_table(1.0, 64, 512);
    let mut sandwich_ok = true;
    let mut tested = 0usize;
    for alpha in [Alpha::new(1, 2), Alpha::from_integer(1), Alpha::from_integer(2)] {
        let est = g_estimate(&table, alpha, 64).unwrap();
        for n in admissible_steps(alpha, 48, 512) {
            let area = integral_area(alpha, n).unwrap();
            let eq = g_finite(&table, n, alpha).unwrap();
            let leq = g_area_leq(&table, n, alpha).unwrap();
            let slack = ((area + 1) as f64).ln() / n as f64;
            sandwich_ok &= eq <= leq + 1e-13;
            sandwich_ok &= leq <= est.value + slack + 1e-13;
            tested += 1;
        }
    }
    verdict(
        "criterion-6 entropy function",
        zero_ok && shape_ok && sandwich_ok,
        &format!(
            "|g(0) + log c_β| ≤ {worst_zero:.1e}; shape on full grid: {}; \
             sandwich on {tested} (N, α) pairs: {}",
            if shape_ok { "ok" } else { "violated" },
            if sandwich_ok { "ok" } else { "violated" }
        ),
    );
}

#[test]
fn criterion_07_decay_exponent() {
    let start = Instant::now();
    let alphas: Vec<Alpha> = [3u64, 4, 5, 6, 8].map(Alpha::from_integer).to_vec();
    let mut pass = true;
    let mut details = Vec::new();
    for (beta, n_max, k_max) in [(0.7, 128, 1024), (1.0, 128, 1024), (1.5, 256, 2048)] {
        let table = cached_table(beta, n_max, k_max);
        let fit = asymptotic_decay_fit(&table, &alphas).unwrap();
        let kept = fit.points.iter().filter(|p| p.converged).count();
        pass &= (1.5..=2.5).contains(&fit.exponent);
        details.push(format!("β={beta}: p = {:.3} ({kept}/5 α converged)", fit.exponent));
    }
    let elapsed = start.elapsed();
    verdict(
        "criterion-7 decay exponent",
        pass,
        &format!("{}, {elapsed:.0?}", details.join("; ")),
    );
}

#[test]
fn criterion_08_collapsed_lower_bounds() {
    let mut worst_margin = f64::INFINITY;
    for &beta in &[1.0, 2.0] {
        let table = cached_table(beta, 37, 35);
        for &length in &[16usize, 25, 36] {
            for model in ModelKind::ALL {
                let log_z = partition_representation(length, beta, model, &table).unwrap();
                let bound = collapsed_ansatz_log_lower_bound(model, length, beta);
                worst_margin = worst_margin.min(log_z - bound);
            }
        }
    }
    verdict(
        "criterion-8 collapsed lower bounds",
        worst_margin >= -1e-12,
        &format!("min (log Z − log bound) = {worst_margin:.4} over L ∈ {{16,25,36}}, β ∈ {{1,2}}"),
    );
}

#[test]
fn criterion_09_growth_constant() {
    let start = Instant::now();
    let counts = path_counts_up_to(201);
    assert_eq!(counts[200].length, 201);
    let ratio = (counts[200].log_count() - counts[199].log_count()).exp();
    let target = 1.0 + 2.0f64.sqrt();
    let diff = (ratio - target).abs();
    let elapsed = start.elapsed();
    verdict(
        "criterion-9 growth constant",
        diff <= 1e-3 && elapsed.as_secs() < 1,
        &format!("|𝒲_201|/|𝒲_200| = {ratio:.9}, |Δ(1+√2)| = {diff:.1e}, {elapsed:.1?}"),
    );
}

#[test]
fn criterion_10_sampler_exactness() {
    let start = Instant::now();
    let (length, beta, model) = (6usize, 1.0f64, ModelKind::NonUniform);
    let samples = 100_000u64;

    let configs = enumerate_stretch_configs(length);
    let log_weights: Vec<f64> = configs
        .iter()
        .map(|c| beta * c.hamiltonian() as f64 + c.path_log_weight::<f64>(model))
        .collect();
    let norm = log_sum_exp(&log_weights);

    let law = GeometricLaw::new(beta).unwrap();
    let layers = LayerTable::build(law, TableSpec::new(length + 1, length - 1)).unwrap();
    let sampler = Sampler::new(&layers, model, length).unwrap();
    let mut freq: HashMap<StretchConfig, u64> = HashMap::new();
    for index in 0..samples {
        let sample = sampler.sample(0, index);
        *freq.entry(sample.stretches).or_insert(0) += 1;
    }

    let mut tv = 0.0f64;
    let mut seen = 0u64;
    for (config, lw) in configs.iter().zip(&log_weights) {
        let exact = (lw - norm).exp();
        let count = freq.get(config).copied().unwrap_or(0);
        seen += count;
        tv += (exact - count as f64 / samples as f64).abs();
    }
    assert_eq!(seen, samples, "every sample lies in the enumerated support");
    tv /= 2.0;
    let elapsed = start.elapsed();
    verdict(
        "criterion-10 sampler exactness",
        tv < 0.01,
        &format!(
            "TV(empirical 10⁵, Gibbs) = {tv:.5} over {} configs at L=6, β=1, nu, seed 0, {elapsed:.0?}",
            configs.len()
        ),
    );
}

#[test]
fn criterion_10_extension_scaling() {
    let start = Instant::now();
    let beta_c = critical_point::<f64>(ModelKind::NonUniform).beta_c;
    let runs: [(f64, &[usize], [f64; 2], bool); 3] = [
        (0.5, &[64, 128, 256], [0.85, 1.05], true),
        (2.0, &[64, 144, 256], [0.35, 0.65], true),
        (beta_c, &[64, 144, 256], [0.5, 0.85], false),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (beta, lengths, bracket, gating) in runs {
        let report =
            extension_scaling_experiment(ModelKind::NonUniform, beta, lengths, 400, 0).unwrap();
        let inside = report.exponent >= bracket[0] && report.exponent <= bracket[1];
        if gating {
            pass &= inside;
        }
        details.push(format!(
            "β={beta:.3}: exponent {:.3} ∈ [{}, {}] {}{}",
            report.exponent,
            bracket[0],
            bracket[1],
            if inside { "yes" } else { "NO" },
            if gating { "" } else { " (non-gating)" }
        ));
    }
    let elapsed = start.elapsed();
    verdict(
        "criterion-10 extension scaling",
        pass,
        &format!("{}, {elapsed:.0?}", details.join("; ")),
    );
}

#[test]
fn criterion_11_upper_bound() {
    let mut worst_margin = f64::INFINITY;
    for &beta in &[0.3, 1.0, 2.0, 3.0] {
        let table = cached_table(beta, 65, 63);
        for &length in &[4usize, 8, 16, 32, 64] {
            for model in ModelKind::ALL {
                let point = finite_size_free_energy(length, beta, model, &table).unwrap();
                worst_margin = worst_margin.min(beta - point.f);
            }
        }
    }
    verdict(
        "criterion-11 finite-size upper bound",
        worst_margin >= -1e-12,
        &format!("min (β − f_L) = {worst_margin:.4} over L ≤ 64 × 4 β × 2 models"),
    );
}
