//! Exact Boltzmann sampling by inverting the representation: draw the
//! horizontal extension `N` from its exact posterior, then the auxiliary
//! walk bridge backward through the forward DP layers, then map to
//! stretches. No rejection, no Markov chain — every draw is an independent
//! exact sample of the finite-volume Gibbs law.
//!
//! Randomness comes from ChaCha8 with one substream per `(seed, sample
//! index)` pair, so batches are reproducible and order-independent; every
//! sample records its provenance. Each draw asserts bridge membership
//! (endpoint zero, exact area) and the touch count before returning.

use crate::lattice::{ModelKind, StretchConfig};
use crate::numerics::log_log_slope;
use crate::scalar::{log_sum_exp, LogFloat, NeumaierSum};
use crate::walk::{
    column_log_weights, walk_to_stretches, GeometricLaw, LayerTable, TableSpec, WalkError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Name pinned into run manifests for provenance.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Default length cap; larger lengths need explicitly budgeted tables.
pub const DEFAULT_MAX_LENGTH: usize = 256;

/// Errors from sampling.
#[derive(Debug, thiserror::Error)]
pub enum SamplerError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("length {length} exceeds the sampling cap {cap}")]
    LengthCap { length: usize, cap: usize },
}

/// One exact sample with its observables and RNG provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSample<T> {
    pub model: ModelKind,
    pub beta: T,
    pub length: usize,
    pub stretches: StretchConfig,
    /// Number of stretches `N`.
    pub horizontal_extension: usize,
    /// Self-touching count; always equals the Hamiltonian of `stretches`.
    pub touches: u64,
    /// Max minus min height visited.
    pub vertical_span: u64,
    pub seed: u64,
    pub sample_index: u64,
}

/// Reusable sampler over a prebuilt layer table.
pub struct Sampler<'a, T> {
    layers: &'a LayerTable<T>,
    model: ModelKind,
    length: usize,
    /// CDF of the extension posterior `𝐏(N = n) ∝ Γ^N 𝐏(𝒱_{N+1,L−N})`.
    extension_cdf: Vec<T>,
}

impl<'a, T: LogFloat> Sampler<'a, T> {
    /// Needs a table covering steps ≤ `length+1` and areas ≤ `length−1`.
    pub fn new(
        layers: &'a LayerTable<T>,
        model: ModelKind,
        length: usize,
    ) -> Result<Self, SamplerError> {
        let beta = layers.law().beta();
        let weights = column_log_weights(length, beta, model, layers.returns())?;
        let norm = log_sum_exp(&weights);
        let mut cdf = Vec::with_capacity(weights.len());
        let mut acc = NeumaierSum::default();
        for &w in &weights {
            acc.add((w - norm).exp());
            cdf.push(acc.total());
        }
        Ok(Self { layers, model, length, extension_cdf: cdf })
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Draw the sample for substream `index` of `seed`. Deterministic in
    /// `(seed, index)` and independent across indices.
    pub fn sample(&self, seed: u64, index: u64) -> PathSample<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let n = self.draw_extension(&mut rng);
        let positions = self.draw_bridge(&mut rng, n);
        let increments: Vec<i64> = positions.windows(2).map(|w| w[1] - w[0]).collect();
        let stretches = walk_to_stretches(&increments).expect("sampled bridge is valid");
        assert_eq!(stretches.total_length(), self.length, "length mismatch");
        assert_eq!(stretches.horizontal_extension(), n, "extension mismatch");
        let touches = stretches.hamiltonian();
        let (lo, hi) = stretches.vertical_span();
        PathSample {
            model: self.model,
            beta: self.layers.law().beta(),
            length: self.length,
            stretches,
            horizontal_extension: n,
            touches,
            vertical_span: (hi - lo) as u64,
            seed,
            sample_index: index,
        }
    }

    fn draw_extension(&self, rng: &mut ChaCha8Rng) -> usize {
        let u = T::from_f64_lossy(rng.gen::<f64>());
        let i = self
            .extension_cdf
            .iter()
            .position(|&c| c >= u)
            .unwrap_or(self.extension_cdf.len() - 1);
        i + 1
    }

    /// Walk the bridge backward from `(V_{N+1} = 0, A_{N+1} = L−N)`,
    /// choosing each predecessor from its exact conditional
    /// `∝ logp[m−1][v'][a − |v|] + log 𝐏(v − v')`.
    fn draw_bridge(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
        let law = self.layers.law();
        let steps = n + 1;
        let mut positions = vec![0i64; steps + 1];
        let mut area = self.length - n;
        let mut weights: Vec<(i64, T)> = Vec::new();
        for m in (1..=steps).rev() {
            let v = positions[m];
            let remaining = area - v.unsigned_abs() as usize;
            weights.clear();
            let mut best = T::neg_infinity();
            let reach = remaining as i64;
            for v_prev in -reach..=reach {
                let w = self.layers.log_prob(m - 1, v_prev, remaining)
                    + law.increment_log_prob(v - v_prev);
                if w > T::neg_infinity() {
                    weights.push((v_prev, w));
                    if w > best {
                        best = w;
                    }
                }
            }
            assert!(!weights.is_empty(), "dead state at step {m}");
            let mut total = NeumaierSum::default();
            for (_, w) in weights.iter_mut() {
                *w = (*w - best).exp();
                total.add(*w);
            }
            let target = T::from_f64_lossy(rng.gen::<f64>()) * total.total();
            let mut acc = NeumaierSum::default();
            let mut chosen = weights[weights.len() - 1].0;
            for &(v_prev, w) in &weights {
                acc.add(w);
                if acc.total() >= target {
                    chosen = v_prev;
                    break;
                }
            }
            positions[m - 1] = chosen;
            area = remaining;
        }
        assert_eq!(positions[0], 0, "bridge must start at zero");
        assert_eq!(area, 0, "bridge must consume the exact area");
        assert_eq!(positions[steps], 0, "bridge must end at zero");
        let total_area: u64 = positions[1..].iter().map(|v| v.unsigned_abs()).sum();
        assert_eq!(total_area as usize, self.length - n, "area mismatch");
        positions
    }
}

/// One-shot sampling: builds the table for `length`, draws substream
/// `index = 0` of `seed`.
pub fn sample_path<T: LogFloat>(
    length: usize,
    beta: T,
    model: ModelKind,
    seed: u64,
) -> Result<PathSample<T>, SamplerError> {
    if length > DEFAULT_MAX_LENGTH {
        return Err(SamplerError::LengthCap { length, cap: DEFAULT_MAX_LENGTH });
    }
    let law = GeometricLaw::new(beta)?;
    let spec = TableSpec::new(length + 1, length.saturating_sub(1).max(1));
    let layers = LayerTable::build(law, spec)?;
    let sampler = Sampler::new(&layers, model, length)?;
    Ok(sampler.sample(seed, 0))
}

/// Mean horizontal extension per length.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScalingEntry<T> {
    pub length: usize,
    pub mean_extension: T,
    pub samples: usize,
}

/// Sampled `E[N_L]` against `L` with the fitted log-log growth exponent:
/// ≈1 extended, ≈1/2 collapsed, between at criticality.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingReport<T> {
    pub model: ModelKind,
    pub beta: T,
    pub seed: u64,
    pub entries: Vec<ScalingEntry<T>>,
    pub exponent: T,
}

/// Sample `samples_per_length` paths at each length and fit the extension
/// exponent. Substream of sample `i` at the `j`-th length is `j·2³² + i`.
pub fn extension_scaling_experiment<T: LogFloat>(
    model: ModelKind,
    beta: T,
    lengths: &[usize],
    samples_per_length: usize,
    seed: u64,
) -> Result<ScalingReport<T>, SamplerError> {
    assert!(lengths.len() >= 2, "need at least two lengths to fit a slope");
    let law = GeometricLaw::new(beta)?;
    let mut entries = Vec::with_capacity(lengths.len());
    for (j, &length) in lengths.iter().enumerate() {
        if length > DEFAULT_MAX_LENGTH {
            return Err(SamplerError::LengthCap { length, cap: DEFAULT_MAX_LENGTH });
        }
        let spec = TableSpec::new(length + 1, length.saturating_sub(1).max(1));
        let layers = LayerTable::build(law, spec)?;
        let sampler = Sampler::new(&layers, model, length)?;
        let mut mean = NeumaierSum::default();
        for i in 0..samples_per_length {
            let stream = (j as u64) << 32 | i as u64;
            let sample = sampler.sample(seed, stream);
            mean.add(T::from_usize(sample.horizontal_extension).expect("N"));
        }
        entries.push(ScalingEntry {
            length,
            mean_extension: mean.total() / T::from_usize(samples_per_length).expect("S"),
            samples: samples_per_length,
        });
    }
    let xs: Vec<T> = entries
        .iter()
        .map(|e| T::from_usize(e.length).expect("L"))
        .collect();
    let ys: Vec<T> = entries.iter().map(|e| e.mean_extension).collect();
    let exponent = log_log_slope(&xs, &ys);
    Ok(ScalingReport { model, beta, seed, entries, exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_stretch_configs, stretches_to_path};

    fn layers(beta: f64, length: usize) -> LayerTable<f64> {
        LayerTable::build(
            GeometricLaw::new(beta).unwrap(),
            TableSpec::new(length + 1, length.saturating_sub(1).max(1)),
        )
        .unwrap()
    }

    #[test]
    fn same_seed_same_sample() {
        let a = sample_path::<f64>(24, 1.1, ModelKind::NonUniform, 42).unwrap();
        let b = sample_path::<f64>(24, 1.1, ModelKind::NonUniform, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_path::<f64>(24, 1.1, ModelKind::NonUniform, 43).unwrap();
        assert_ne!(a.stretches, c.stretches);
    }

    #[test]
    fn substreams_differ_and_are_order_free() {
        let t = layers(0.9, 20);
        let s = Sampler::new(&t, ModelKind::Uniform, 20).unwrap();
        let first = s.sample(5, 0);
        let second = s.sample(5, 1);
        assert_ne!(first, second);
        assert_eq!(s.sample(5, 1), second, "replay out of order");
    }

    #[test]
    fn l2_conditional_law() {
        let t = layers(1.7, 2);
        let s = Sampler::new(&t, ModelKind::NonUniform, 2).unwrap();
        let mut flat = 0u32;
        let mut up = 0u32;
        let mut down = 0u32;
        let total = 100_000;
        for i in 0..total {
            let sample = s.sample(11, i as u64);
            match sample.stretches.stretches() {
                [0, 0] => flat += 1,
                [1] => up += 1,
                [-1] => down += 1,
                other => panic!("impossible L=2 config {other:?}"),
            }
        }
        // P(flat) = (1/9)/(4/9) = 1/4, P(±1) = (1/6)/(4/9) = 3/8; 3σ bands.
        let band = |p: f64| 3.0 * (p * (1.0 - p) / total as f64).sqrt();
        assert!((flat as f64 / total as f64 - 0.25).abs() < band(0.25), "flat={flat}");
        assert!((up as f64 / total as f64 - 0.375).abs() < band(0.375), "up={up}");
        assert!((down as f64 / total as f64 - 0.375).abs() < band(0.375), "down={down}");
    }

    #[test]
    fn mean_touches_matches_exact_gibbs_at_l10() {
        let beta = 1.0;
        let length = 10;
        // Exact Gibbs mean and variance of H by enumeration.
        let mut z = 0.0f64;
        let mut mean_h = 0.0f64;
        let mut mean_h2 = 0.0f64;
        for cfg in enumerate_stretch_configs(length) {
            let w: f64 = (beta * cfg.hamiltonian() as f64
                + cfg.path_log_weight::<f64>(ModelKind::NonUniform))
            .exp();
            z += w;
            mean_h += w * cfg.hamiltonian() as f64;
            mean_h2 += w * (cfg.hamiltonian() as f64).powi(2);
        }
        mean_h /= z;
        mean_h2 /= z;
        let sigma = (mean_h2 - mean_h * mean_h).sqrt();

        let t = layers(beta, length);
        let s = Sampler::new(&t, ModelKind::NonUniform, length).unwrap();
        let total = 100_000u64;
        let mut acc = NeumaierSum::<f64>::default();
        for i in 0..total {
            acc.add(s.sample(3, i) .touches as f64);
        }
        let empirical = acc.total() / total as f64;
        let band = 3.0 * sigma / (total as f64).sqrt();
        assert!(
            (empirical - mean_h).abs() < band,
            "E[H]: {empirical} vs {mean_h} ± {band}"
        );
    }

    #[test]
    fn geometric_touch_oracle_on_samples() {
        let t = layers(1.3, 12);
        let s = Sampler::new(&t, ModelKind::Uniform, 12).unwrap();
        for i in 0..200 {
            let sample = s.sample(9, i);
            let path = stretches_to_path(&sample.stretches);
            assert_eq!(path.count_self_touchings(), sample.touches);
            let (lo, hi) = sample.stretches.vertical_span();
            assert_eq!((hi - lo) as u64, sample.vertical_span);
        }
    }

    #[test]
    fn length_cap_is_enforced() {
        let err = sample_path::<f64>(300, 1.0, ModelKind::Uniform, 0).unwrap_err();
        assert!(matches!(err, SamplerError::LengthCap { .. }));
    }

    #[test]
    fn scaling_experiment_smoke() {
        let report = extension_scaling_experiment::<f64>(
            ModelKind::NonUniform,
            2.0,
            &[16, 36],
            200,
            1,
        )
        .unwrap();
        assert_eq!(report.entries.len(), 2);
        assert!(report.exponent > 0.0 && report.exponent < 1.2);
        assert_eq!(report.seed, 1);
    }
}
