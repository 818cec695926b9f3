//! Ground-truth path model: stretch configurations, the lattice-path
//! bijection, the Hamiltonian, reference-law weights, and exact counting.
//!
//! A walk of total length `L` takes steps east, north, or south on ℤ², never
//! reverses a vertical step (that is the only way a partially directed walk
//! could self-intersect), and ends with an east step. Equivalently it is a
//! vector `l ∈ ℤ^N` of signed vertical stretch lengths with
//! `Σ|l_n| + N = L`: each stretch is a maximal vertical run followed by one
//! east step. All energetics live on stretches; [`LatticePath`] exists for
//! oracle checks and rendering.
//!
//! Self-touchings (non-consecutive vertex pairs at lattice distance 1) are
//! counted by the wedge operator on adjacent stretches:
//! `x∧̃y = min(|x|,|y|)` when the signs oppose, else `0`.

use crate::scalar::{log_sum_exp, LogFloat};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// Reference law on paths: uniform on 𝒲_L, or the kinetic step-by-step law.
///
/// The choice selects the path weights here and the per-column factors
/// `Γ^m`, `Φ^m` in the partition-function representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// `P^u(w) = 1/|𝒲_L|`.
    Uniform,
    /// `P^nu(w) = (1/3)^N (1/2)^{L−N}`: each step picks east/north/south
    /// uniformly, except forced continuations after a vertical step.
    NonUniform,
}

impl ModelKind {
    pub const ALL: [ModelKind; 2] = [ModelKind::Uniform, ModelKind::NonUniform];
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Uniform => write!(f, "u"),
            ModelKind::NonUniform => write!(f, "nu"),
        }
    }
}

impl FromStr for ModelKind {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, LatticeError> {
        match s {
            "u" | "uniform" => Ok(ModelKind::Uniform),
            "nu" | "non-uniform" | "nonuniform" => Ok(ModelKind::NonUniform),
            _ => Err(LatticeError::UnknownModel(s.to_string())),
        }
    }
}

/// Errors from path/stretch validation and the brute-force guard.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("stretch configuration must contain at least one stretch")]
    EmptyStretches,
    #[error("invalid lattice path: {0}")]
    InvalidPath(String),
    #[error("unknown model '{0}' (expected 'u' or 'nu')")]
    UnknownModel(String),
    #[error("brute force refused: L={length} exceeds cutoff {cutoff} (cost grows like (1+√2)^L)")]
    BruteForceCutoff { length: usize, cutoff: usize },
}

/// `x∧̃y`: touchings contributed by adjacent stretches `x`, `y`.
///
/// Equals `min(|x|,|y|)` when `xy < 0` and `0` otherwise, which is the same
/// as `(|x| + |y| − |x+y|)/2`.
pub fn wedge(x: i64, y: i64) -> u64 {
    ((x.abs() + y.abs() - (x + y).abs()) / 2) as u64
}

/// A path as its vector of signed vertical stretch lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StretchConfig {
    stretches: Vec<i64>,
}

impl StretchConfig {
    pub fn new(stretches: Vec<i64>) -> Result<Self, LatticeError> {
        if stretches.is_empty() {
            return Err(LatticeError::EmptyStretches);
        }
        Ok(Self { stretches })
    }

    pub fn stretches(&self) -> &[i64] {
        &self.stretches
    }

    /// Horizontal extension `N` — the number of stretches / east steps.
    pub fn horizontal_extension(&self) -> usize {
        self.stretches.len()
    }

    /// Total length `L = Σ|l_n| + N`.
    pub fn total_length(&self) -> usize {
        let vertical: u64 = self.stretches.iter().map(|l| l.unsigned_abs()).sum();
        vertical as usize + self.stretches.len()
    }

    /// Self-touching count `Σ_{n} l_n ∧̃ l_{n+1}`; the energy is β times this.
    pub fn hamiltonian(&self) -> u64 {
        self.stretches
            .windows(2)
            .map(|w| wedge(w[0], w[1]))
            .sum()
    }

    /// `(min, max)` vertical coordinate visited by the corresponding path.
    pub fn vertical_span(&self) -> (i64, i64) {
        let mut height = 0i64;
        let mut lo = 0i64;
        let mut hi = 0i64;
        for &l in &self.stretches {
            height += l;
            lo = lo.min(height);
            hi = hi.max(height);
        }
        (lo, hi)
    }

    /// Log reference weight `log P^m` of this configuration.
    ///
    /// Uniform weights need `|𝒲_L|`, which is recomputed here; batch callers
    /// should subtract `log_count` themselves.
    pub fn path_log_weight<T: LogFloat>(&self, model: ModelKind) -> T {
        let n = T::from_usize(self.horizontal_extension()).expect("N");
        let l = T::from_usize(self.total_length()).expect("L");
        match model {
            ModelKind::Uniform => -T::from_f64_lossy(count_paths(self.total_length()).log_count()),
            ModelKind::NonUniform => {
                let three = T::from_f64_lossy(3.0);
                let two = T::from_f64_lossy(2.0);
                -(n * three.ln()) - (l - n) * two.ln()
            }
        }
    }
}

/// A path as explicit lattice vertices; used as the geometric oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePath {
    vertices: Vec<(i64, i64)>,
}

impl LatticePath {
    /// Validates: starts at the origin, steps in {east, north, south}, all
    /// vertices distinct, last step east.
    pub fn new(vertices: Vec<(i64, i64)>) -> Result<Self, LatticeError> {
        if vertices.len() < 2 {
            return Err(LatticeError::InvalidPath("need at least one step".into()));
        }
        if vertices[0] != (0, 0) {
            return Err(LatticeError::InvalidPath("must start at the origin".into()));
        }
        for w in vertices.windows(2) {
            let step = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            if !matches!(step, (1, 0) | (0, 1) | (0, -1)) {
                return Err(LatticeError::InvalidPath(format!(
                    "illegal step {step:?}"
                )));
            }
        }
        let last = vertices[vertices.len() - 1];
        let prev = vertices[vertices.len() - 2];
        if (last.0 - prev.0, last.1 - prev.1) != (1, 0) {
            return Err(LatticeError::InvalidPath("last step must be east".into()));
        }
        let distinct: HashSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(LatticeError::InvalidPath("vertices repeat".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[(i64, i64)] {
        &self.vertices
    }

    /// Number of steps `L`.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Count of non-consecutive vertex pairs at lattice distance 1.
    ///
    /// Quadratic pair scan — deliberately independent of the stretch-side
    /// wedge formula so the two can cross-check each other.
    pub fn count_self_touchings(&self) -> u64 {
        let v = &self.vertices;
        let mut touchings = 0;
        for i in 0..v.len() {
            for j in (i + 2)..v.len() {
                let d = (v[i].0 - v[j].0).abs() + (v[i].1 - v[j].1).abs();
                if d == 1 {
                    touchings += 1;
                }
            }
        }
        touchings
    }
}

/// Stretch configuration → lattice path (climb each stretch, then step east).
pub fn stretches_to_path(cfg: &StretchConfig) -> LatticePath {
    let mut vertices = Vec::with_capacity(cfg.total_length() + 1);
    let (mut x, mut y) = (0i64, 0i64);
    vertices.push((x, y));
    for &l in cfg.stretches() {
        let dir = l.signum();
        for _ in 0..l.abs() {
            y += dir;
            vertices.push((x, y));
        }
        x += 1;
        vertices.push((x, y));
    }
    LatticePath::new(vertices).expect("stretch configurations always map to valid paths")
}

/// Lattice path → stretch configuration (inverse of [`stretches_to_path`]).
pub fn path_to_stretches(path: &LatticePath) -> StretchConfig {
    let mut stretches = Vec::new();
    let mut run = 0i64;
    for w in path.vertices().windows(2) {
        match (w[1].0 - w[0].0, w[1].1 - w[0].1) {
            (0, dy) => run += dy,
            (1, 0) => {
                stretches.push(run);
                run = 0;
            }
            _ => unreachable!("validated path"),
        }
    }
    StretchConfig::new(stretches).expect("validated path has at least one east step")
}

/// Exact `|𝒲_L|` with its length tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCount {
    pub length: usize,
    pub count: BigUint,
}

impl PathCount {
    /// `log |𝒲_L|`, exact integer converted at the boundary only.
    pub fn log_count(&self) -> f64 {
        // Direct conversion overflows f64 near L ≈ 800; scale by powers of
        // two first so any length within table budgets works.
        let bits = self.count.bits();
        if bits <= 1000 {
            self.count.to_f64().expect("fits").ln()
        } else {
            let shift = bits - 64;
            let head = (&self.count >> shift).to_f64().expect("64-bit head");
            head.ln() + (shift as f64) * std::f64::consts::LN_2
        }
    }
}

/// Exact `|𝒲_L|` via the stretch decomposition:
/// `|𝒲_L| = Σ_{N≥1} #{l ∈ ℤ^N : Σ|l| = L−N}`, computed by an
/// arbitrary-precision DP over (stretch index, remaining vertical length).
pub fn count_paths(length: usize) -> PathCount {
    path_counts_up_to(length)
        .pop()
        .expect("length ≥ 1 produces at least one entry")
}

/// `|𝒲_L|` for every `L ∈ {1, …, l_max}` from one DP triangle.
///
/// `ways[r]` holds `#{l ∈ ℤ^n : Σ|l| = r}` for the current number of
/// stretches `n`; the update uses prefix sums of the previous row, since a
/// new stretch of length `±k` contributes `2` sign choices for `k ≥ 1`.
pub fn path_counts_up_to(l_max: usize) -> Vec<PathCount> {
    assert!(l_max >= 1, "need L ≥ 1");
    let mut totals = vec![BigUint::zero(); l_max + 1];
    let mut ways = vec![BigUint::zero(); l_max];
    ways[0] = BigUint::one();
    for n in 1..=l_max {
        // ways'(r) = ways(r) + 2·Σ_{s<r} ways(s), for r ≤ l_max − n.
        let mut prefix = BigUint::zero();
        let mut next = vec![BigUint::zero(); l_max - n + 1];
        for (r, slot) in next.iter_mut().enumerate() {
            *slot = &ways[r] + 2u32 * &prefix;
            prefix += &ways[r];
        }
        for r in 0..next.len() {
            totals[n + r] += &next[r];
        }
        ways = next;
    }
    (1..=l_max)
        .map(|length| PathCount { length, count: totals[length].clone() })
        .collect()
}

/// All stretch configurations of total length `L`, in a fixed deterministic
/// order. `|𝒲_14| ≈ 2.3·10⁶` is the intended ceiling for callers.
pub fn enumerate_stretch_configs(length: usize) -> Vec<StretchConfig> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(remaining: usize, current: &mut Vec<i64>, out: &mut Vec<StretchConfig>) {
        if remaining == 0 {
            if !current.is_empty() {
                out.push(StretchConfig::new(current.clone()).expect("nonempty"));
            }
            return;
        }
        // Next stretch costs |l| + 1 monomers; enumerate 0, ±1, ±2, …
        for magnitude in 0..remaining {
            let signs: &[i64] = if magnitude == 0 { &[1] } else { &[1, -1] };
            for &sign in signs {
                current.push(sign * magnitude as i64);
                recurse(remaining - magnitude - 1, current, out);
                current.pop();
            }
        }
    }
    recurse(length, &mut current, &mut out);
    out
}

/// Default ceiling for [`partition_brute_force`].
pub const BRUTE_FORCE_CUTOFF: usize = 14;

/// `log Z^m_{L,β}` by exhaustive summation over all configurations.
///
/// The reference oracle for the representation identity. Admits `β = 0`
/// (where `Z` is the total reference mass). Refuses `L` above `cutoff`.
pub fn partition_brute_force_with_cutoff<T: LogFloat>(
    length: usize,
    beta: T,
    model: ModelKind,
    cutoff: usize,
) -> Result<T, LatticeError> {
    if length > cutoff {
        return Err(LatticeError::BruteForceCutoff { length, cutoff });
    }
    let log_uniform = -T::from_f64_lossy(count_paths(length).log_count());
    let log_third = -T::from_f64_lossy(3.0).ln();
    let log_half = -T::from_f64_lossy(2.0).ln();
    let terms: Vec<T> = enumerate_stretch_configs(length)
        .iter()
        .map(|cfg| {
            let energy = beta * T::from_u64(cfg.hamiltonian()).expect("H");
            let weight = match model {
                ModelKind::Uniform => log_uniform,
                ModelKind::NonUniform => {
                    let n = T::from_usize(cfg.horizontal_extension()).expect("N");
                    let l = T::from_usize(length).expect("L");
                    n * log_third + (l - n) * log_half
                }
            };
            energy + weight
        })
        .collect();
    Ok(log_sum_exp(&terms))
}

/// [`partition_brute_force_with_cutoff`] at the default cutoff of 14.
pub fn partition_brute_force<T: LogFloat>(
    length: usize,
    beta: T,
    model: ModelKind,
) -> Result<T, LatticeError> {
    partition_brute_force_with_cutoff(length, beta, model, BRUTE_FORCE_CUTOFF)
}
