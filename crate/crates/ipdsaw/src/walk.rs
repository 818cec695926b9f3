//! Auxiliary-walk representation: geometric-increment law, constrained DP
//! tables, and the two-factor partition identity.
//!
//! The partition function factorizes over stretches once adjacent stretches
//! are rewritten as increments `v_n = (−1)^{n−1}(l_{n−1} + l_n)` of a random
//! walk `V` with i.i.d. increments `𝐏_β(v = k) ∝ e^{−β|k|/2}`. A length-L
//! configuration with `N` stretches maps to a walk bridge in
//! `𝒱_{N+1, L−N}`: return to zero after `N+1` steps with total absolute
//! area `Σ|V_i| = L − N`. All of this crate's heavy computation is the
//! forward DP over the pair process `(V_n, A_n)` built here.
//!
//! Probabilities are stored as logs; `-inf` marks impossible states. The
//! per-layer convolution with the two-sided geometric kernel is evaluated by
//! a pair of sweeps (left-inclusive, right-strict geometric accumulators),
//! which costs O(1) per cell and introduces no truncation: events with area
//! at most `K_max` are computed exactly.

use crate::lattice::{count_paths, ModelKind};
use crate::scalar::{log_add_exp, log_sum_exp, LogFloat, NeumaierSum};
use std::io::{self, Read, Write};
use std::path::Path;

/// Memory guard: maximum number of table cells a build may allocate.
pub const DEFAULT_CELL_BUDGET: u64 = 2_000_000_000;

/// Errors from table construction and the representation assembly.
#[derive(Debug, thiserror::Error)]
pub enum WalkError {
    #[error("coupling must be positive, got β={0}")]
    NonPositiveBeta(f64),
    #[error("table budget exceeded: {needed} cells needed, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("table too small: need steps ≤ {need_n}/area ≤ {need_k}, table has {have_n}/{have_k}")]
    TableTooSmall {
        need_n: usize,
        need_k: usize,
        have_n: usize,
        have_k: usize,
    },
    #[error("index out of table range: n={n}, k={k}")]
    OutOfRange { n: usize, k: usize },
    #[error("invalid checkpoint: {0}")]
    InvalidCheckpoint(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The increment law `𝐏_β(v = k) = e^{−β|k|/2} / c_β` on ℤ, with
/// `c_β = (1 + e^{−β/2}) / (1 − e^{−β/2})`.
#[derive(Clone, Copy, Debug)]
pub struct GeometricLaw<T> {
    beta: T,
    log_c: T,
}

impl<T: LogFloat> GeometricLaw<T> {
    pub fn new(beta: T) -> Result<Self, WalkError> {
        if !(beta > T::zero()) {
            return Err(WalkError::NonPositiveBeta(
                beta.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let half = T::from_f64_lossy(0.5);
        let q = (-beta * half).exp();
        // log c_β = log(1+q) − log(1−q), with 1−q = −expm1(−β/2) kept
        // accurate for small β.
        let log_c = q.ln_1p() - (-(-beta * half).exp_m1()).ln();
        Ok(Self { beta, log_c })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// `log c_β`.
    pub fn log_c_beta(&self) -> T {
        self.log_c
    }

    pub fn c_beta(&self) -> T {
        self.log_c.exp()
    }

    /// `log 𝐏_β(v = k) = −β|k|/2 − log c_β`.
    pub fn increment_log_prob(&self, k: i64) -> T {
        let half = T::from_f64_lossy(0.5);
        -self.beta * half * T::from_u64(k.unsigned_abs()).expect("|k|") - self.log_c
    }

    /// `log Γ^m(β)`, where `Γ^u = c_β e^{−β}` and `Γ^nu = (2/3) c_β e^{−β}`.
    pub fn log_gamma(&self, model: ModelKind) -> T {
        let base = self.log_c - self.beta;
        match model {
            ModelKind::Uniform => base,
            ModelKind::NonUniform => {
                base + T::from_f64_lossy(2.0).ln() - T::from_f64_lossy(3.0).ln()
            }
        }
    }
}

/// Per-column factor `Γ^m(β)` and prefactor `log Φ^m_{L,β}` of the
/// representation, bundled for reporting.
#[derive(Clone, Copy, Debug)]
pub struct GammaPhi<T> {
    pub model: ModelKind,
    pub gamma: T,
    pub log_phi: T,
}

/// `Γ^m(β)` and `log Φ^m_{L,β}` (`Φ^u = e^{βL}/|𝒲_L|`, `Φ^nu = (e^β/2)^L`).
pub fn gamma_phi<T: LogFloat>(
    model: ModelKind,
    beta: T,
    length: usize,
) -> Result<GammaPhi<T>, WalkError> {
    let law = GeometricLaw::new(beta)?;
    let l = T::from_usize(length).expect("L");
    let log_phi = match model {
        ModelKind::Uniform => beta * l - T::from_f64_lossy(count_paths(length).log_count()),
        ModelKind::NonUniform => l * (beta - T::from_f64_lossy(2.0).ln()),
    };
    Ok(GammaPhi { model, gamma: law.log_gamma(model).exp(), log_phi })
}

/// Requested table dimensions plus the memory guard.
#[derive(Clone, Copy, Debug)]
pub struct TableSpec {
    /// Largest walk step `n` covered.
    pub n_max: usize,
    /// Largest area (and |position|) covered.
    pub k_max: usize,
    /// Cell budget; builds refuse rather than allocate beyond it.
    pub cell_budget: u64,
}

impl TableSpec {
    pub fn new(n_max: usize, k_max: usize) -> Self {
        Self { n_max, k_max, cell_budget: DEFAULT_CELL_BUDGET }
    }

    pub fn with_cell_budget(mut self, cell_budget: u64) -> Self {
        self.cell_budget = cell_budget;
        self
    }

    fn layer_cells(&self) -> u64 {
        (self.k_max as u64 + 1) * (2 * self.k_max as u64 + 1)
    }

    fn return_cells(&self) -> u64 {
        (self.n_max as u64 + 1) * (self.k_max as u64 + 1)
    }
}

/// `log 𝐏_β(V_n = 0, A_n = a)` for `n ≤ n_max`, `a ≤ k_max`: the bridge
/// ("return") probabilities that enter the partition representation.
///
/// Built by streaming the layer DP with two ping-pong buffers, so memory
/// stays at two layers regardless of `n_max`.
#[derive(Clone, Debug)]
pub struct ReturnTable<T> {
    beta: T,
    n_max: usize,
    k_max: usize,
    /// Row-major `(n_max+1) × (k_max+1)`.
    rows: Vec<T>,
}

/// Full layer store `log 𝐏_β(V_n = v, A_n = a)`; needed only for backward
/// sampling. Memory is `(n_max+1)` layers of `(k_max+1)(2k_max+1)` cells.
#[derive(Clone, Debug)]
pub struct LayerTable<T> {
    law: GeometricLaw<T>,
    n_max: usize,
    k_max: usize,
    layers: Vec<Vec<T>>,
    returns: ReturnTable<T>,
}

/// One DP layer: `slab[a·(2K+1) + (K+v)] = log 𝐏(V_n = v, A_n = a)`.
struct Layer<T> {
    k: usize,
    slab: Vec<T>,
}

impl<T: LogFloat> Layer<T> {
    fn empty(k: usize) -> Self {
        let width = 2 * k + 1;
        Self { k, slab: vec![T::neg_infinity(); (k + 1) * width] }
    }

    #[inline]
    fn idx(&self, a: usize, v: i64) -> usize {
        a * (2 * self.k + 1) + (self.k as i64 + v) as usize
    }

    #[inline]
    fn get(&self, a: usize, v: i64) -> T {
        self.slab[self.idx(a, v)]
    }
}

/// Advance one DP step: `next[a][v] = Σ_{v'} prev[a − |v|][v'] 𝐏(v − v')`.
///
/// For each source area `a'` the geometric kernel is folded with two sweeps:
/// the left-inclusive accumulator `Λ(v) = Σ_{v' ≤ v} T(v') q^{v−v'}` obeys
/// `Λ(v) = T(v) + q·Λ(v−1)`, and the right-strict one mirrors it; their sum
/// is the exact convolution. Source mass lives in `|v'| ≤ a'` and targets
/// need `|v| ≤ K − a'`, so sweeping `|v| ≤ max(a', K − a')` loses nothing.
fn advance_layer<T: LogFloat>(
    law: &GeometricLaw<T>,
    prev: &Layer<T>,
    next: &mut Layer<T>,
    scratch: &mut [T],
) {
    let k = prev.k;
    let half = T::from_f64_lossy(0.5);
    let log_q = -law.beta() * half;
    let log_c = law.log_c_beta();
    // Every target cell is overwritten below; clear so cells outside all
    // bands keep their impossible marker.
    next.slab.fill(T::neg_infinity());
    for a_src in 0..=k {
        let m_out = (k - a_src) as i64;
        let m = (a_src as i64).max(m_out);
        let mut lacc = T::neg_infinity();
        for v in -m..=m {
            lacc = log_add_exp(lacc + log_q, prev.get(a_src, v));
            if v.abs() <= m_out {
                scratch[(k as i64 + v) as usize] = lacc;
            }
        }
        let mut racc = T::neg_infinity();
        for v in (-m..m).rev() {
            racc = log_add_exp(racc, prev.get(a_src, v + 1)) + log_q;
            if v.abs() <= m_out {
                let slot = &mut scratch[(k as i64 + v) as usize];
                *slot = log_add_exp(*slot, racc);
            }
        }
        for v in -m_out..=m_out {
            let a = a_src + v.unsigned_abs() as usize;
            let slot = next.idx(a, v);
            next.slab[slot] = scratch[(k as i64 + v) as usize] - log_c;
        }
    }
}

fn build<T: LogFloat>(
    law: GeometricLaw<T>,
    spec: TableSpec,
    keep_layers: bool,
) -> Result<(ReturnTable<T>, Option<Vec<Vec<T>>>), WalkError> {
    let needed = if keep_layers {
        (spec.n_max as u64 + 2) * spec.layer_cells() + spec.return_cells()
    } else {
        2 * spec.layer_cells() + spec.return_cells()
    };
    if needed > spec.cell_budget {
        return Err(WalkError::BudgetExceeded { needed, budget: spec.cell_budget });
    }
    let k = spec.k_max;
    let mut prev = Layer::empty(k);
    let mut next = Layer::empty(k);
    let origin = prev.idx(0, 0);
    prev.slab[origin] = T::zero();
    let mut rows = vec![T::neg_infinity(); (spec.n_max + 1) * (k + 1)];
    rows[0] = T::zero();
    let mut scratch = vec![T::neg_infinity(); 2 * k + 1];
    let mut layers = if keep_layers {
        vec![prev.slab.clone()]
    } else {
        Vec::new()
    };
    for n in 1..=spec.n_max {
        advance_layer(&law, &prev, &mut next, &mut scratch);
        for a in 0..=k {
            rows[n * (k + 1) + a] = next.get(a, 0);
        }
        if keep_layers {
            layers.push(next.slab.clone());
        }
        std::mem::swap(&mut prev, &mut next);
    }
    let returns = ReturnTable {
        beta: law.beta(),
        n_max: spec.n_max,
        k_max: spec.k_max,
        rows,
    };
    Ok((returns, keep_layers.then_some(layers)))
}

impl<T: LogFloat> ReturnTable<T> {
    pub fn build(law: GeometricLaw<T>, spec: TableSpec) -> Result<Self, WalkError> {
        Ok(build(law, spec, false)?.0)
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `log 𝐏_β(𝒱_{n,k})`: return to zero at step `n` with area exactly `k`.
    pub fn constrained_return_prob(&self, n: usize, k: usize) -> Result<T, WalkError> {
        if n > self.n_max || k > self.k_max {
            return Err(WalkError::OutOfRange { n, k });
        }
        Ok(self.rows[n * (self.k_max + 1) + k])
    }

    /// Row `a ↦ log 𝐏_β(V_n = 0, A_n = a)`.
    pub fn returns_at(&self, n: usize) -> &[T] {
        &self.rows[n * (self.k_max + 1)..(n + 1) * (self.k_max + 1)]
    }
}

impl ReturnTable<f64> {
    const CHECKPOINT_MAGIC: &'static [u8; 8] = b"IPDWRET\x01";

    /// Serialize as a little-endian binary checkpoint with a header carrying
    /// (β bits, n_max, k_max); used by the CLI to amortize β sweeps.
    pub fn write_checkpoint<W: Write>(&self, mut sink: W) -> Result<(), WalkError> {
        sink.write_all(Self::CHECKPOINT_MAGIC)?;
        sink.write_all(&self.beta.to_bits().to_le_bytes())?;
        sink.write_all(&(self.n_max as u64).to_le_bytes())?;
        sink.write_all(&(self.k_max as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.rows.len() * 8);
        for &x in &self.rows {
            buf.extend_from_slice(&x.to_bits().to_le_bytes());
        }
        sink.write_all(&buf)?;
        Ok(())
    }

    pub fn read_checkpoint<R: Read>(mut source: R) -> Result<Self, WalkError> {
        let mut magic = [0u8; 8];
        source.read_exact(&mut magic)?;
        if &magic != Self::CHECKPOINT_MAGIC {
            return Err(WalkError::InvalidCheckpoint("bad magic/version".into()));
        }
        let mut word = [0u8; 8];
        source.read_exact(&mut word)?;
        let beta = f64::from_bits(u64::from_le_bytes(word));
        source.read_exact(&mut word)?;
        let n_max = u64::from_le_bytes(word) as usize;
        source.read_exact(&mut word)?;
        let k_max = u64::from_le_bytes(word) as usize;
        if !(beta > 0.0) || n_max > (1 << 32) || k_max > (1 << 32) {
            return Err(WalkError::InvalidCheckpoint("implausible header".into()));
        }
        let cells = (n_max + 1) * (k_max + 1);
        let mut buf = vec![0u8; cells * 8];
        source.read_exact(&mut buf)?;
        let rows = buf
            .chunks_exact(8)
            .map(|c| f64::from_bits(u64::from_le_bytes(c.try_into().expect("8 bytes"))))
            .collect();
        Ok(Self { beta, n_max, k_max, rows })
    }

    pub fn write_checkpoint_file(&self, path: &Path) -> Result<(), WalkError> {
        let file = std::fs::File::create(path)?;
        self.write_checkpoint(io::BufWriter::new(file))
    }

    pub fn read_checkpoint_file(path: &Path) -> Result<Self, WalkError> {
        let file = std::fs::File::open(path)?;
        Self::read_checkpoint(io::BufReader::new(file))
    }
}

impl<T: LogFloat> LayerTable<T> {
    pub fn build(law: GeometricLaw<T>, spec: TableSpec) -> Result<Self, WalkError> {
        let (returns, layers) = build(law, spec, true)?;
        Ok(Self {
            law,
            n_max: spec.n_max,
            k_max: spec.k_max,
            layers: layers.expect("requested layers"),
            returns,
        })
    }

    pub fn law(&self) -> &GeometricLaw<T> {
        &self.law
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn returns(&self) -> &ReturnTable<T> {
        &self.returns
    }

    /// `log 𝐏_β(V_n = v, A_n = a)`; `-inf` outside the stored range.
    pub fn log_prob(&self, n: usize, v: i64, a: usize) -> T {
        if n > self.n_max || a > self.k_max || v.unsigned_abs() as usize > self.k_max {
            return T::neg_infinity();
        }
        let width = 2 * self.k_max + 1;
        self.layers[n][a * width + (self.k_max as i64 + v) as usize]
    }
}

/// `log 𝐏_β(V_n = 0)` without any area constraint, by direct n-fold
/// convolution of the increment law truncated to `|v| ≤ support_cutoff`.
///
/// The discarded probability per step is the geometric tail
/// `2 q^{C+1}/((1−q) c_β)` with `q = e^{−β/2}`; the cutoff should be chosen
/// so `n` times that is below the comparison tolerance.
pub fn unconstrained_return_prob<T: LogFloat>(
    law: &GeometricLaw<T>,
    n: usize,
    support_cutoff: usize,
) -> T {
    let c = support_cutoff as i64;
    let reach = c * n as i64;
    let offset = |v: i64| (v + reach) as usize;
    let mut dist = vec![T::neg_infinity(); 2 * reach as usize + 1];
    dist[offset(0)] = T::zero();
    for step in 0..n {
        let prev_reach = c * step as i64;
        let mut next = vec![T::neg_infinity(); dist.len()];
        for v in -prev_reach..=prev_reach {
            let p = dist[offset(v)];
            if p == T::neg_infinity() {
                continue;
            }
            for k in -c..=c {
                let slot = &mut next[offset(v + k)];
                *slot = log_add_exp(*slot, p + law.increment_log_prob(k));
            }
        }
        dist = next;
    }
    dist[offset(0)]
}

/// `log Z^m_{L,β}` through the representation:
/// `Z = c_β · Φ^m_{L,β} · Σ_{N=1}^{L} (Γ^m)^N 𝐏_β(𝒱_{N+1, L−N})`.
///
/// Needs a table covering steps up to `L+1` and areas up to `L−1`.
pub fn partition_representation<T: LogFloat>(
    length: usize,
    beta: T,
    model: ModelKind,
    table: &ReturnTable<T>,
) -> Result<T, WalkError> {
    let law = GeometricLaw::new(beta)?;
    let terms = column_log_weights(length, beta, model, table)?;
    let gp = gamma_phi(model, beta, length)?;
    Ok(law.log_c_beta() + gp.log_phi + log_sum_exp(&terms))
}

/// Unnormalized log weights of the horizontal extension under the Gibbs law:
/// entry `N−1` is `N log Γ^m + log 𝐏_β(𝒱_{N+1, L−N})` for `N = 1, …, L`.
///
/// Normalizing gives the exact law of `N`; summing gives the partition sum.
pub fn column_log_weights<T: LogFloat>(
    length: usize,
    beta: T,
    model: ModelKind,
    table: &ReturnTable<T>,
) -> Result<Vec<T>, WalkError> {
    if length < 1 {
        return Err(WalkError::OutOfRange { n: 0, k: 0 });
    }
    if table.n_max() < length + 1 || table.k_max() + 1 < length {
        return Err(WalkError::TableTooSmall {
            need_n: length + 1,
            need_k: length.saturating_sub(1),
            have_n: table.n_max(),
            have_k: table.k_max(),
        });
    }
    let law = GeometricLaw::new(beta)?;
    let log_gamma = law.log_gamma(model);
    (1..=length)
        .map(|n| {
            let bridge = table.constrained_return_prob(n + 1, length - n)?;
            Ok(T::from_usize(n).expect("N") * log_gamma + bridge)
        })
        .collect()
}

/// Exact Gibbs expectation of the horizontal extension `E[N]` at length `L`.
pub fn mean_horizontal_extension<T: LogFloat>(
    length: usize,
    beta: T,
    model: ModelKind,
    table: &ReturnTable<T>,
) -> Result<T, WalkError> {
    let weights = column_log_weights(length, beta, model, table)?;
    let norm = log_sum_exp(&weights);
    let mut mean = NeumaierSum::default();
    for (i, &w) in weights.iter().enumerate() {
        let n = T::from_usize(i + 1).expect("N");
        mean.add(n * (w - norm).exp());
    }
    Ok(mean.total())
}

/// Walk increments of a stretch configuration:
/// `v_n = (−1)^{n−1}(l_{n−1} + l_n)` with `l_0 = l_{N+1} = 0`.
///
/// The partial sums satisfy `V_n = (−1)^{n−1} l_n`, so the induced walk ends
/// at `V_{N+1} = 0` with area `Σ|V_i| = L − N`.
pub fn stretch_to_walk(cfg: &crate::lattice::StretchConfig) -> Vec<i64> {
    let l = cfg.stretches();
    let n = l.len();
    (0..=n)
        .map(|i| {
            let prev = if i == 0 { 0 } else { l[i - 1] };
            let cur = if i == n { 0 } else { l[i] };
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * (prev + cur)
        })
        .collect()
}

/// Inverse of [`stretch_to_walk`]: recover stretches via
/// `l_n = (−1)^{n−1} V_n` from the increment sequence.
pub fn walk_to_stretches(
    increments: &[i64],
) -> Result<crate::lattice::StretchConfig, WalkError> {
    if increments.len() < 2 {
        return Err(WalkError::InvalidCheckpoint(
            "walk needs at least two increments".into(),
        ));
    }
    let mut position = 0i64;
    let mut stretches = Vec::with_capacity(increments.len() - 1);
    for (i, &v) in increments[..increments.len() - 1].iter().enumerate() {
        position += v;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        stretches.push(sign * position);
    }
    position += increments[increments.len() - 1];
    if position != 0 {
        return Err(WalkError::InvalidCheckpoint(
            "walk does not return to zero".into(),
        ));
    }
    crate::lattice::StretchConfig::new(stretches)
        .map_err(|e| WalkError::InvalidCheckpoint(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_stretch_configs, partition_brute_force, StretchConfig};

    const BETA_LN4: f64 = 1.3862943611198906; // 2·ln 2, where e^{−β/2} = 1/2

    fn law(beta: f64) -> GeometricLaw<f64> {
        GeometricLaw::new(beta).unwrap()
    }

    #[test]
    fn increment_law_at_two_ln_two() {
        let law = law(BETA_LN4);
        assert!((law.c_beta() - 3.0).abs() < 1e-14);
        assert!((law.increment_log_prob(0) - (1.0f64 / 3.0).ln()).abs() < 1e-14);
        for k in [-1i64, 1] {
            assert!((law.increment_log_prob(k) - (1.0f64 / 6.0).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn increment_law_normalizes() {
        // |k| ≤ 60 suffices at β = 2 ln 2; smaller β needs the cutoff scaled
        // with the geometric tail ~ e^{−βC/2}.
        let terms: Vec<f64> = (-60..=60)
            .map(|k| law(BETA_LN4).increment_log_prob(k))
            .collect();
        assert!(log_sum_exp(&terms).abs() < 1e-12);
        for beta in [0.3, 1.0, 2.5] {
            let law = law(beta);
            let cutoff = 60i64.max((80.0 / beta).ceil() as i64);
            let terms: Vec<f64> = (-cutoff..=cutoff)
                .map(|k| law.increment_log_prob(k))
                .collect();
            assert!(log_sum_exp(&terms).abs() < 1e-12, "β={beta}");
        }
    }

    #[test]
    fn rejects_non_positive_beta() {
        assert!(GeometricLaw::new(0.0f64).is_err());
        assert!(GeometricLaw::new(-1.0f64).is_err());
    }

    #[test]
    fn first_layer_matches_increment_law() {
        let law = law(0.9);
        let table = LayerTable::build(law, TableSpec::new(1, 8)).unwrap();
        for v in -8i64..=8 {
            let a = v.unsigned_abs() as usize;
            let got = table.log_prob(1, v, a);
            assert!((got - law.increment_log_prob(v)).abs() < 1e-14, "v={v}");
        }
        // Off the |v| = a diagonal nothing is reachable in one step.
        assert_eq!(table.log_prob(1, 1, 3), f64::NEG_INFINITY);
    }

    #[test]
    fn two_step_returns_by_hand() {
        let table = ReturnTable::build(law(BETA_LN4), TableSpec::new(2, 4)).unwrap();
        let p20 = table.constrained_return_prob(2, 0).unwrap();
        assert!((p20.exp() - 1.0 / 9.0).abs() < 1e-14);
        let p21 = table.constrained_return_prob(2, 1).unwrap();
        assert!((p21.exp() - 1.0 / 18.0).abs() < 1e-14);
    }

    #[test]
    fn zero_area_diagonal_is_exact() {
        let table = ReturnTable::build(law(1.7), TableSpec::new(10, 6)).unwrap();
        let log_c = law(1.7).log_c_beta();
        for n in 1..=10 {
            let got = table.constrained_return_prob(n, 0).unwrap();
            assert!(
                (got + n as f64 * log_c).abs() < 1e-12,
                "𝐏(𝒱_{{n,0}}) = c_β^{{−n}} at n={n}"
            );
        }
    }

    #[test]
    fn area_marginal_matches_unconstrained_convolution() {
        for beta in [0.8, 1.5] {
            let law = law(beta);
            for n in 1..=6 {
                let cutoff = 60;
                let table =
                    ReturnTable::build(law, TableSpec::new(n, n * cutoff)).unwrap();
                let marginal = log_sum_exp(table.returns_at(n));
                let direct = unconstrained_return_prob(&law, n, cutoff);
                assert!(
                    (marginal - direct).abs() < 1e-8,
                    "β={beta}, n={n}: {marginal} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn superadditivity_of_constrained_returns() {
        let table = ReturnTable::build(law(1.1), TableSpec::new(24, 48)).unwrap();
        let p = |n: usize, k: usize| table.constrained_return_prob(n, k).unwrap();
        for (n1, k1, n2, k2) in [
            (2usize, 1usize, 2usize, 1usize),
            (3, 2, 5, 4),
            (4, 0, 4, 6),
            (6, 9, 6, 9),
            (10, 3, 8, 12),
            (12, 24, 12, 24),
        ] {
            assert!(
                p(n1 + n2, k1 + k2) >= p(n1, k1) + p(n2, k2) - 1e-12,
                "({n1},{k1}) + ({n2},{k2})"
            );
        }
    }

    #[test]
    fn representation_matches_brute_force_small() {
        for length in [2usize, 3, 6, 9] {
            let spec = TableSpec::new(length + 1, length.max(2) - 1);
            for beta in [0.4, 1.0, 2.2] {
                let table = ReturnTable::build(law(beta), spec).unwrap();
                for model in ModelKind::ALL {
                    let repr = partition_representation(length, beta, model, &table).unwrap();
                    let brute = partition_brute_force(length, beta, model).unwrap();
                    assert!(
                        (repr - brute).abs() < 1e-12,
                        "L={length}, β={beta}, {model}: {repr} vs {brute}"
                    );
                }
            }
        }
    }

    #[test]
    fn gamma_values() {
        let gp = gamma_phi(ModelKind::Uniform, BETA_LN4, 2).unwrap();
        assert!((gp.gamma - 0.75).abs() < 1e-14, "Γ^u = c_β/e^β = 3/4");
        let gp = gamma_phi::<f64>(ModelKind::NonUniform, 1.3, 10).unwrap();
        assert!((gp.log_phi - 10.0 * (1.3 - 2.0f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn gamma_strictly_decreasing_in_beta() {
        for model in ModelKind::ALL {
            let mut prev = f64::INFINITY;
            for i in 0..=49 {
                let beta = 0.1 + i as f64 * 0.1;
                let gamma = law(beta).log_gamma(model);
                assert!(gamma < prev, "Γ^{model} not decreasing at β={beta}");
                prev = gamma;
            }
        }
    }

    #[test]
    fn budget_guard_refuses_oversized_tables() {
        let spec = TableSpec::new(10, 4).with_cell_budget(64);
        match ReturnTable::build(law(1.0), spec) {
            Err(WalkError::BudgetExceeded { .. }) => {}
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn checkpoint_round_trips_bit_exactly() {
        let table = ReturnTable::build(law(0.77), TableSpec::new(12, 20)).unwrap();
        let mut buf = Vec::new();
        table.write_checkpoint(&mut buf).unwrap();
        let back = ReturnTable::read_checkpoint(buf.as_slice()).unwrap();
        assert_eq!(back.beta(), table.beta());
        assert_eq!(back.n_max(), table.n_max());
        assert_eq!(back.k_max(), table.k_max());
        for n in 0..=12 {
            for a in 0..=20 {
                let x = table.constrained_return_prob(n, a).unwrap();
                let y = back.constrained_return_prob(n, a).unwrap();
                assert!(x == y || (x.is_infinite() && y.is_infinite()));
            }
        }
    }

    #[test]
    fn checkpoint_rejects_garbage() {
        assert!(ReturnTable::read_checkpoint(&b"not a checkpoint"[..]).is_err());
    }

    #[test]
    fn walk_transform_on_the_seven_stretch_example() {
        let cfg = StretchConfig::new(vec![3, -4, 3, 2, 0, -2, 3]).unwrap();
        let v = stretch_to_walk(&cfg);
        assert_eq!(v, vec![3, 1, -1, -5, 2, 2, 1, -3]);
        // Bridge in 𝒱_{8,17}: position sums to zero, area to L−N = 17.
        let mut position = 0i64;
        let mut area = 0u64;
        for &step in &v {
            position += step;
            area += position.unsigned_abs();
        }
        assert_eq!(position, 0);
        assert_eq!(area, 17);
        assert_eq!(walk_to_stretches(&v).unwrap(), cfg);
    }

    #[test]
    fn walk_transform_round_trips_exhaustively() {
        for length in 1..=8 {
            for cfg in enumerate_stretch_configs(length) {
                let v = stretch_to_walk(&cfg);
                assert_eq!(v.len(), cfg.horizontal_extension() + 1);
                // |V_n| = |l_n| along the way.
                let mut position = 0i64;
                for (i, &step) in v[..v.len() - 1].iter().enumerate() {
                    position += step;
                    assert_eq!(position.abs(), cfg.stretches()[i].abs());
                }
                assert_eq!(walk_to_stretches(&v).unwrap(), cfg);
            }
        }
    }

    #[test]
    fn flat_configuration_maps_to_zero_walk() {
        let cfg = StretchConfig::new(vec![0, 0, 0]).unwrap();
        assert_eq!(stretch_to_walk(&cfg), vec![0, 0, 0, 0]);
    }

    #[test]
    fn table_truncation_is_monotone_in_k_max() {
        // Events with area ≤ K are exact: enlarging K must not change them.
        let small = ReturnTable::build(law(1.3), TableSpec::new(8, 10)).unwrap();
        let large = ReturnTable::build(law(1.3), TableSpec::new(8, 30)).unwrap();
        for n in 0..=8 {
            for a in 0..=10 {
                let x = small.constrained_return_prob(n, a).unwrap();
                let y = large.constrained_return_prob(n, a).unwrap();
                assert!(
                    x == y || (x.is_infinite() && y.is_infinite()),
                    "truncation leak at n={n}, a={a}"
                );
            }
        }
    }
}
