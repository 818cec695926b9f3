//! The entropic function `g_β`: finite-`N` values, superadditive sup
//! estimates over an α grid, the inequality-constrained variant, and the
//! large-α decay fit.
//!
//! `g_β(α)` is the exponential cost rate of forcing the auxiliary walk to
//! return to zero after `N` steps with area exactly `αN`. Finite-`N` values
//! `g_{N,β}(α) = (1/N) log 𝐏_β(𝒱_{N,αN})` are rigorous lower bounds of the
//! limit (superadditivity), and the sup over admissible `N` is the best
//! bound a table affords. Convergence in `N` is slow and has no usable
//! two-sided rate, so every estimate here carries an explicit convergence
//! indicator instead of a claimed error bar:
//!
//! * [`g_estimate`] reports `lower_gap`, the improvement over the half-sized
//!   table — small gap means the sup has stabilized;
//! * [`asymptotic_decay_fit`] uses doubling increments
//!   `(a_{2N} − a_N)/N` of `a_N = log 𝐏_β(𝒱_{N,αN})`, which cancel the
//!   `O(log N / N)` bias of the plain sup, and keeps a point only when the
//!   increment agrees with the previous doubling pair to 25%.
//!
//! [`EntropyCurve`] additionally pools the sup values across the grid:
//! a running maximum (the limit is nondecreasing) followed by the upper
//! concave hull (the limit is concave) — both pooled values remain lower
//! bounds and restore the shape properties that raw finite-`N` values lose
//! where the area cap truncates the admissible `N` range.

use crate::numerics::linear_fit;
use crate::scalar::{log_sum_exp, LogFloat};
use crate::walk::{ReturnTable, WalkError};
use num_rational::Ratio;

/// Area-per-step ratio; exact rational so `αN ∈ ℕ` is decidable.
pub type Alpha = Ratio<u64>;

/// Maximum relative drift between consecutive doubling increments for a
/// decay-fit point to count as converged.
pub const DECAY_DRIFT_MAX: f64 = 0.25;

/// Minimum number of converged points [`asymptotic_decay_fit`] requires.
pub const DECAY_MIN_POINTS: usize = 3;

/// Errors from entropy estimation.
#[derive(Debug, thiserror::Error)]
pub enum EntropyError {
    #[error("αN = {alpha}·{n} is not an integer")]
    NonIntegralArea { alpha: Alpha, n: usize },
    #[error("g_N needs N ≥ 2, got {n}")]
    TooFewSteps { n: usize },
    #[error("no admissible N for α = {alpha} within steps ≤ {n_max}, area ≤ {k_max}")]
    NoAdmissibleSteps { alpha: Alpha, n_max: usize, k_max: usize },
    #[error("decay fit refused: only {converged} converged points (≥ {needed} required)")]
    Unconverged { converged: usize, needed: usize },
    #[error(transparent)]
    Table(#[from] WalkError),
}

/// `αN` if integral, else an error.
pub fn integral_area(alpha: Alpha, n: usize) -> Result<usize, EntropyError> {
    let p = *alpha.numer();
    let q = *alpha.denom();
    let scaled = p * n as u64;
    if scaled % q != 0 {
        return Err(EntropyError::NonIntegralArea { alpha, n });
    }
    Ok((scaled / q) as usize)
}

/// All `N ≤ n_max` with `N ≥ 2`, `αN ∈ ℕ`, and `αN ≤ k_max`, ascending.
pub fn admissible_steps(alpha: Alpha, n_max: usize, k_max: usize) -> Vec<usize> {
    let q = *alpha.denom() as usize;
    let p = *alpha.numer() as usize;
    (1..)
        .map(|i| i * q)
        .take_while(|&n| n <= n_max)
        .filter(|&n| n >= 2 && p * n / q <= k_max)
        .collect()
}

/// The default α grid: eighths on [0,4], quarters on (4,8], halves on
/// (8,16], integers on (16,32]. Dense where the variational argmax lands,
/// coarse in the deep tail.
pub fn default_alpha_grid() -> Vec<Alpha> {
    let mut grid: Vec<Alpha> = (0..=32).map(|k| Alpha::new(k, 8)).collect();
    grid.extend((1..=16).map(|k| Alpha::new(16 + k, 4)));
    grid.extend((1..=16).map(|k| Alpha::new(16 + k, 2)));
    grid.extend((17..=32).map(|k| Alpha::from_integer(k)));
    grid
}

/// [`default_alpha_grid`] restricted to αs with at least one admissible `N`.
pub fn feasible_alpha_grid(n_max: usize, k_max: usize) -> Vec<Alpha> {
    default_alpha_grid()
        .into_iter()
        .filter(|&a| !admissible_steps(a, n_max, k_max).is_empty())
        .collect()
}

/// `g_{N,β}(α) = (1/N) log 𝐏_β(𝒱_{N,αN})`.
pub fn g_finite<T: LogFloat>(
    table: &ReturnTable<T>,
    n: usize,
    alpha: Alpha,
) -> Result<T, EntropyError> {
    if n < 2 {
        return Err(EntropyError::TooFewSteps { n });
    }
    let area = integral_area(alpha, n)?;
    let log_p = table.constrained_return_prob(n, area)?;
    Ok(log_p / T::from_usize(n).expect("N"))
}

/// A sup estimate with its convergence indicator.
#[derive(Clone, Copy, Debug)]
pub struct GEstimate<T> {
    /// `max_N g_{N,β}(α)` over admissible `N`: a rigorous lower bound.
    pub value: T,
    /// `value − g` at the largest admissible `N ≤ n_max/2`; infinite when
    /// the half-range has no admissible `N`.
    pub lower_gap: T,
    /// The maximizing `N`.
    pub argmax_steps: usize,
}

/// Best finite-`N` lower bound on `g_β(α)` from steps up to `n_max`.
pub fn g_estimate<T: LogFloat>(
    table: &ReturnTable<T>,
    alpha: Alpha,
    n_max: usize,
) -> Result<GEstimate<T>, EntropyError> {
    g_estimate_within(table, alpha, n_max.min(table.n_max()), table.k_max())
}

fn g_estimate_within<T: LogFloat>(
    table: &ReturnTable<T>,
    alpha: Alpha,
    n_max: usize,
    k_max: usize,
) -> Result<GEstimate<T>, EntropyError> {
    let admissible = admissible_steps(alpha, n_max, k_max);
    if admissible.is_empty() {
        return Err(EntropyError::NoAdmissibleSteps { alpha, n_max, k_max });
    }
    let mut value = T::neg_infinity();
    let mut argmax_steps = 0;
    for &n in &admissible {
        let g = g_finite(table, n, alpha)?;
        if g > value {
            value = g;
            argmax_steps = n;
        }
    }
    let half = admissible.iter().rev().find(|&&n| n <= n_max / 2);
    let lower_gap = match half {
        Some(&n) => value - g_finite(table, n, alpha)?,
        None => T::infinity(),
    };
    Ok(GEstimate { value, lower_gap, argmax_steps })
}

/// Inequality-constrained variant
/// `(1/N) log 𝐏_β(A_N ≤ ⌊αN⌋, V_N = 0)`; sits between `g_{N}` at equality
/// and the sup estimate plus `log(αN+1)/N`.
pub fn g_area_leq<T: LogFloat>(
    table: &ReturnTable<T>,
    n: usize,
    alpha: Alpha,
) -> Result<T, EntropyError> {
    if n < 2 {
        return Err(EntropyError::TooFewSteps { n });
    }
    let floor_area = (*alpha.numer() as usize * n) / *alpha.denom() as usize;
    if floor_area > table.k_max() {
        return Err(WalkError::OutOfRange { n, k: floor_area }.into());
    }
    let row = table.returns_at(n);
    Ok(log_sum_exp(&row[..=floor_area]) / T::from_usize(n).expect("N"))
}

/// One grid node of an [`EntropyCurve`].
#[derive(Clone, Copy, Debug)]
pub struct EntropyPoint<T> {
    pub alpha: Alpha,
    /// Maximizing `N` of the raw sup.
    pub steps: usize,
    /// Raw sup value `g_{N,β}(α)` at that `N`.
    pub g_finite: T,
    /// Regularized estimate: running max + upper concave hull of the sups.
    pub g_est: T,
    /// Convergence indicator of the raw sup ([`GEstimate::lower_gap`]).
    pub lower_gap: T,
}

/// Lower-bound estimates of `g_β` on an α grid, regularized to the shape
/// the limit provably has (nondecreasing, concave, nonpositive).
#[derive(Clone, Debug)]
pub struct EntropyCurve<T> {
    beta: T,
    n_max: usize,
    k_max: usize,
    points: Vec<EntropyPoint<T>>,
}

impl<T: LogFloat> EntropyCurve<T> {
    /// Build from a table, restricting to steps ≤ `n_max`, areas ≤ `k_max`
    /// (both clamped to the table). The restriction exists so curves at a
    /// coarser level can be compared against finer ones from one table.
    pub fn regularized(
        table: &ReturnTable<T>,
        grid: &[Alpha],
        n_max: usize,
        k_max: usize,
    ) -> Result<Self, EntropyError> {
        let n_max = n_max.min(table.n_max());
        let k_max = k_max.min(table.k_max());
        let mut alphas: Vec<Alpha> = grid.to_vec();
        alphas.sort();
        alphas.dedup();
        let raw: Vec<GEstimate<T>> = alphas
            .iter()
            .map(|&a| g_estimate_within(table, a, n_max, k_max))
            .collect::<Result<_, _>>()?;
        // Running max: the limit is nondecreasing, so the best bound at α
        // is the best bound at any α' ≤ α.
        let mut pooled: Vec<T> = Vec::with_capacity(raw.len());
        let mut best = T::neg_infinity();
        for est in &raw {
            if est.value > best {
                best = est.value;
            }
            pooled.push(best);
        }
        // Upper concave hull (monotone chain): the limit is concave, so any
        // chord between two lower bounds is itself a lower bound.
        let xs: Vec<T> = alphas
            .iter()
            .map(|a| {
                T::from_u64(*a.numer()).expect("α") / T::from_u64(*a.denom()).expect("α")
            })
            .collect();
        let mut hull: Vec<usize> = Vec::new();
        for i in 0..xs.len() {
            while hull.len() >= 2 {
                let i0 = hull[hull.len() - 2];
                let i1 = hull[hull.len() - 1];
                let lhs = (pooled[i1] - pooled[i0]) * (xs[i] - xs[i1]);
                let rhs = (pooled[i] - pooled[i1]) * (xs[i1] - xs[i0]);
                if lhs <= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(i);
        }
        let mut points = Vec::with_capacity(xs.len());
        let mut seg = 0;
        for i in 0..xs.len() {
            while seg + 1 < hull.len() && xs[hull[seg + 1]] <= xs[i] {
                seg += 1;
            }
            let g_est = if seg + 1 < hull.len() && xs[hull[seg]] < xs[i] {
                let (i0, i1) = (hull[seg], hull[seg + 1]);
                let t = (xs[i] - xs[i0]) / (xs[i1] - xs[i0]);
                pooled[i0] + t * (pooled[i1] - pooled[i0])
            } else {
                pooled[hull[seg]]
            };
            points.push(EntropyPoint {
                alpha: alphas[i],
                steps: raw[i].argmax_steps,
                g_finite: raw[i].value,
                g_est,
                lower_gap: raw[i].lower_gap,
            });
        }
        Ok(Self { beta: table.beta(), n_max, k_max, points })
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

    pub fn points(&self) -> &[EntropyPoint<T>] {
        &self.points
    }

    /// Piecewise-linear interpolation of `g_est`; constant beyond the grid
    /// ends (both extensions preserve the lower-bound property).
    pub fn value_at(&self, x: T) -> T {
        let xs: Vec<T> = self
            .points
            .iter()
            .map(|p| {
                T::from_u64(*p.alpha.numer()).expect("α")
                    / T::from_u64(*p.alpha.denom()).expect("α")
            })
            .collect();
        if x <= xs[0] {
            return self.points[0].g_est;
        }
        if x >= xs[xs.len() - 1] {
            return self.points[self.points.len() - 1].g_est;
        }
        let mut i = 0;
        while i + 1 < xs.len() && xs[i + 1] <= x {
            i += 1;
        }
        let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        self.points[i].g_est + t * (self.points[i + 1].g_est - self.points[i].g_est)
    }

    /// CSV dump with the pinned column order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,alpha_num,alpha_den,N,g_N,g_est,gap\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.beta,
                p.alpha.numer(),
                p.alpha.denom(),
                p.steps,
                p.g_finite,
                p.g_est,
                p.lower_gap
            ));
        }
        out
    }
}

/// One α of a decay fit: the doubling-increment estimate and its drift.
#[derive(Clone, Copy, Debug)]
pub struct DecayPoint<T> {
    pub alpha: Alpha,
    /// `(a_{2N} − a_N)/N` at the largest admissible doubling pair.
    pub value: T,
    /// `|increment − previous increment| / |increment|`; `None` when only
    /// one doubling pair fits in the table.
    pub relative_drift: Option<T>,
    /// Negative value and drift ≤ [`DECAY_DRIFT_MAX`].
    pub converged: bool,
}

/// Result of [`asymptotic_decay_fit`].
#[derive(Clone, Debug)]
pub struct DecayFit<T> {
    /// Fitted `p` in `g_β(α) ≈ −c/α^p`, from converged points only.
    pub exponent: T,
    pub points: Vec<DecayPoint<T>>,
}

fn doubling_increment<T: LogFloat>(
    table: &ReturnTable<T>,
    alpha: Alpha,
    n: usize,
) -> Result<T, EntropyError> {
    let a_n = table.constrained_return_prob(n, integral_area(alpha, n)?)?;
    let a_2n = table.constrained_return_prob(2 * n, integral_area(alpha, 2 * n)?)?;
    Ok((a_2n - a_n) / T::from_usize(n).expect("N"))
}

/// Estimate `g_β(α)` by the largest-in-table doubling increment, with the
/// previous pair as drift indicator.
pub fn g_refined<T: LogFloat>(
    table: &ReturnTable<T>,
    alpha: Alpha,
) -> Result<DecayPoint<T>, EntropyError> {
    let adm = admissible_steps(alpha, table.n_max(), table.k_max());
    let pairs: Vec<usize> = adm
        .iter()
        .copied()
        .filter(|&n| adm.binary_search(&(2 * n)).is_ok())
        .collect();
    let Some(&n_top) = pairs.last() else {
        return Err(EntropyError::NoAdmissibleSteps {
            alpha,
            n_max: table.n_max(),
            k_max: table.k_max(),
        });
    };
    let value = doubling_increment(table, alpha, n_top)?;
    let prev_n = if n_top % 2 == 0 && pairs.binary_search(&(n_top / 2)).is_ok() {
        Some(n_top / 2)
    } else if pairs.len() >= 2 {
        Some(pairs[pairs.len() - 2])
    } else {
        None
    };
    let relative_drift = match prev_n {
        Some(n) => {
            let prev = doubling_increment(table, alpha, n)?;
            if value == T::zero() {
                None
            } else {
                Some(((value - prev) / value).abs())
            }
        }
        None => None,
    };
    let drift_max = T::from_f64_lossy(DECAY_DRIFT_MAX);
    let converged = value < T::zero()
        && matches!(relative_drift, Some(d) if d <= drift_max);
    Ok(DecayPoint { alpha, value, relative_drift, converged })
}

/// Fit the decay exponent `p` of `−g_β(α) ≈ c/α^p` over `alphas`, keeping
/// converged points only; refuses when fewer than [`DECAY_MIN_POINTS`]
/// survive.
pub fn asymptotic_decay_fit<T: LogFloat>(
    table: &ReturnTable<T>,
    alphas: &[Alpha],
) -> Result<DecayFit<T>, EntropyError> {
    let points: Vec<DecayPoint<T>> = alphas
        .iter()
        .map(|&a| g_refined(table, a))
        .collect::<Result<_, _>>()?;
    let kept: Vec<&DecayPoint<T>> = points.iter().filter(|p| p.converged).collect();
    if kept.len() < DECAY_MIN_POINTS {
        return Err(EntropyError::Unconverged {
            converged: kept.len(),
            needed: DECAY_MIN_POINTS,
        });
    }
    let xs: Vec<T> = kept
        .iter()
        .map(|p| {
            (T::from_u64(*p.alpha.numer()).expect("α")
                / T::from_u64(*p.alpha.denom()).expect("α"))
            .ln()
        })
        .collect();
    let ys: Vec<T> = kept.iter().map(|p| (-p.value).ln()).collect();
    let (slope, _) = linear_fit(&xs, &ys);
    Ok(DecayFit { exponent: -slope, points })
}
