//! Free energies: finite-size values, the variational excess free energy,
//! critical points, and the transition-order fit.
//!
//! The infinite-volume free energy splits as `f = φ^m_β + f̃^m(β)` with
//! `φ^u = β − log(1+√2)`, `φ^nu = β − log 2` the fully collapsed rates and
//! `f̃ ≥ 0` the excess. The excess has a variational form
//! `f̃ = sup_{α∈[0,1]} α log Γ^m(β) + α g_β((1−α)/α)`: `α` is the horizontal
//! density `N/L`, each column pays `log Γ`, and the `g` term prices the area
//! constraint on the auxiliary walk. The collapsed phase is exactly
//! `f̃ = 0`; `Γ^m(β_c) = 1` pins the critical point.
//!
//! All `g` inputs are lower bounds ([`crate::entropy`]), so every computed
//! `f̃` is itself a lower bound; phase labels and fit refusals are defined
//! relative to an explicit numerical floor rather than exact zero.

use crate::entropy::{EntropyCurve, EntropyError};
use crate::lattice::{count_paths, ModelKind};
use crate::numerics::{bisect, golden_section_max, linear_fit};
use crate::scalar::LogFloat;
use crate::walk::{partition_representation, GeometricLaw, ReturnTable, WalkError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `f̃` below this is reported as exactly collapsed; the sup of nonpositive
/// objectives is zero only analytically.
pub const NUMERICAL_FLOOR: f64 = 1e-9;

/// Uniform α-grid size for the variational sup (golden-section refined).
pub const VARIATIONAL_GRID: usize = 512;

/// Errors from free-energy computation.
#[derive(Debug, thiserror::Error)]
pub enum FreeEnergyError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("order fit refused: f̃ = {excess:.3e} at ε = {epsilon} is below 10× floor")]
    ExcessBelowFloor { epsilon: f64, excess: f64 },
}

/// Phase label relative to [`NUMERICAL_FLOOR`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Collapsed,
    Extended,
    CriticalWindow,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Collapsed => write!(f, "collapsed"),
            Phase::Extended => write!(f, "extended"),
            Phase::CriticalWindow => write!(f, "critical-window"),
        }
    }
}

/// A free-energy evaluation, finite-size (`length = Some`) or variational
/// limit (`length = None`).
///
/// `f_excess = f − φ^m_β`; for the limit object it is nonnegative up to the
/// floor, while finite-size values may sit below `φ`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FreeEnergyPoint<T> {
    pub model: ModelKind,
    pub beta: T,
    pub length: Option<usize>,
    pub f: T,
    pub f_excess: T,
    pub phase: Option<Phase>,
}

/// A critical coupling with the residual of its defining equation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CriticalPoint<T> {
    pub model: ModelKind,
    pub beta_c: T,
    /// `|Γ^m(β_c) − 1|`.
    pub residual: T,
}

/// Collapsed-phase rate `φ^m_β`: the exact `L→∞` free energy when `f̃ = 0`.
pub fn phi<T: LogFloat>(model: ModelKind, beta: T) -> T {
    match model {
        ModelKind::Uniform => beta - (T::one() + T::from_f64_lossy(2.0).sqrt()).ln(),
        ModelKind::NonUniform => beta - T::from_f64_lossy(2.0).ln(),
    }
}

/// `f^m_L(β) = (1/L) log Z^m_{L,β}` through the representation.
pub fn finite_size_free_energy<T: LogFloat>(
    length: usize,
    beta: T,
    model: ModelKind,
    table: &ReturnTable<T>,
) -> Result<FreeEnergyPoint<T>, FreeEnergyError> {
    let log_z = partition_representation(length, beta, model, table)?;
    let f = log_z / T::from_usize(length).expect("L");
    Ok(FreeEnergyPoint {
        model,
        beta,
        length: Some(length),
        f,
        f_excess: f - phi(model, beta),
        phase: None,
    })
}

/// Root of `Γ^m(β) = 1` by bisection of `log Γ^m` on `[0.1, 5]`.
pub fn critical_point<T: LogFloat>(model: ModelKind) -> CriticalPoint<T> {
    let gamma_log = |beta: T| GeometricLaw::new(beta).expect("β>0").log_gamma(model);
    let beta_c = bisect(
        T::from_f64_lossy(0.1),
        T::from_f64_lossy(5.0),
        T::from_f64_lossy(1e-15),
        gamma_log,
    );
    CriticalPoint { model, beta_c, residual: gamma_log(beta_c).exp_m1().abs() }
}

/// Independent route to `β_c`: the cubic each `Γ^m(β) = 1` reduces to.
///
/// With `x = e^{β/2}`, the nu equation becomes `3x³ − 3x² − 2x − 2 = 0`;
/// with `y = e^{−β/2}`, the u equation becomes `y³ + y² + y − 1 = 0`.
pub fn critical_point_cubic<T: LogFloat>(model: ModelKind) -> CriticalPoint<T> {
    let two = T::from_f64_lossy(2.0);
    let three = T::from_f64_lossy(3.0);
    let tol = T::from_f64_lossy(1e-15);
    let beta_c = match model {
        ModelKind::NonUniform => {
            let root = bisect(T::one(), two, tol, |x| {
                ((three * x - three) * x - two) * x - two
            });
            two * root.ln()
        }
        ModelKind::Uniform => {
            let root = bisect(T::from_f64_lossy(0.1), T::one(), tol, |y| {
                ((y + T::one()) * y + T::one()) * y - T::one()
            });
            -two * root.ln()
        }
    };
    let residual = GeometricLaw::new(beta_c)
        .expect("β>0")
        .log_gamma(model)
        .exp_m1()
        .abs();
    CriticalPoint { model, beta_c, residual }
}

/// Variational integrand `α log Γ^m(β) + α g_β((1−α)/α)`, with the `α = 0`
/// value fixed to `0` by continuity.
pub fn variational_objective<T: LogFloat>(
    alpha: T,
    beta: T,
    model: ModelKind,
    curve: &EntropyCurve<T>,
) -> Result<T, FreeEnergyError> {
    let log_gamma = GeometricLaw::new(beta)?.log_gamma(model);
    Ok(objective(alpha, log_gamma, curve))
}

fn objective<T: LogFloat>(alpha: T, log_gamma: T, curve: &EntropyCurve<T>) -> T {
    if alpha <= T::zero() {
        return T::zero();
    }
    alpha * log_gamma + alpha * curve.value_at((T::one() - alpha) / alpha)
}

/// The variational excess with diagnostics about its maximizer.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ExcessReport<T> {
    pub point: FreeEnergyPoint<T>,
    /// Horizontal density at the sup (smallest maximizer on ties).
    pub alpha_star: T,
    /// Spread of grid points within `10⁻¹²` of the sup; the variational
    /// problem is not asserted to have a unique maximizer.
    pub argmax_diameter: T,
}

/// `f̃^m(β) = sup_{α∈[0,1]}` of the objective over a [`VARIATIONAL_GRID`]
/// plus golden-section refinement around the grid argmax, and the assembled
/// `f = φ + f̃` with its phase label.
pub fn excess_free_energy<T: LogFloat>(
    beta: T,
    model: ModelKind,
    curve: &EntropyCurve<T>,
) -> Result<ExcessReport<T>, FreeEnergyError> {
    let log_gamma = GeometricLaw::new(beta)?.log_gamma(model);
    let n = VARIATIONAL_GRID;
    let step = T::one() / T::from_usize(n).expect("grid");
    let mut best_i = 0;
    let mut best = T::neg_infinity();
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let alpha = T::from_usize(i).expect("grid") * step;
        let v = objective(alpha, log_gamma, curve);
        values.push((alpha, v));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = values[best_i.saturating_sub(1)].0;
    let hi = values[(best_i + 1).min(n)].0;
    let (alpha_fine, v_fine) = golden_section_max(lo, hi, 80, |a| {
        objective(a, log_gamma, curve)
    });
    let (mut alpha_star, mut excess) = (values[best_i].0, best);
    if v_fine > excess {
        alpha_star = alpha_fine;
        excess = v_fine;
    }
    // α = 0 contributes objective 0, so the sup is never negative; tiny
    // negative best can only arise if the grid skipped it, which it cannot.
    if excess < T::zero() {
        excess = T::zero();
        alpha_star = T::zero();
    }
    let near = T::from_f64_lossy(1e-12);
    let close: Vec<T> = values
        .iter()
        .filter(|(_, v)| *v >= excess - near)
        .map(|(a, _)| *a)
        .collect();
    let argmax_diameter = match (close.first(), close.last()) {
        (Some(&a), Some(&b)) => b - a,
        _ => T::zero(),
    };
    let floor = T::from_f64_lossy(NUMERICAL_FLOOR);
    let ten = T::from_f64_lossy(10.0);
    let phase = if excess < floor {
        Phase::Collapsed
    } else if excess < ten * floor {
        Phase::CriticalWindow
    } else {
        Phase::Extended
    };
    Ok(ExcessReport {
        point: FreeEnergyPoint {
            model,
            beta,
            length: None,
            f: phi(model, beta) + excess,
            f_excess: excess,
            phase: Some(phase),
        },
        alpha_star,
        argmax_diameter,
    })
}

/// One `(ε, f̃, α*)` entry of an order fit.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OrderPoint<T> {
    pub epsilon: T,
    pub excess: T,
    pub alpha_star: T,
}

/// The fit at one table level (`n_max`, `k_max` restriction of `g`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderLevel<T> {
    pub n_max: usize,
    pub k_max: usize,
    pub exponent: T,
    pub points: Vec<OrderPoint<T>>,
}

/// Transition-order fit with its level-doubling drift diagnostic.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderFit<T> {
    pub model: ModelKind,
    pub beta_c: T,
    /// Coarsest to finest; the headline exponent is the finest level's.
    pub levels: Vec<OrderLevel<T>>,
}

impl<T: LogFloat> OrderFit<T> {
    /// Exponent at the finest level.
    pub fn exponent(&self) -> T {
        self.levels.last().expect("at least one level").exponent
    }

    /// `|exponent − 3/2|` per level; the fit is trustworthy when this is
    /// non-increasing as the level doubles.
    pub fn drift(&self) -> Vec<T> {
        let target = T::from_f64_lossy(1.5);
        self.levels.iter().map(|l| (l.exponent - target).abs()).collect()
    }
}

/// Fit the log-log slope of `f̃(β_c − ε)` against `ε` at each table level.
///
/// `curve_for(β, n_max, k_max)` supplies the entropy curve at the given
/// restriction; levels should double so [`OrderFit::drift`] is meaningful.
/// Refuses when any `f̃` sits below 10× the numerical floor.
pub fn transition_order_fit<T, F>(
    model: ModelKind,
    eps_grid: &[T],
    levels: &[(usize, usize)],
    mut curve_for: F,
) -> Result<OrderFit<T>, FreeEnergyError>
where
    T: LogFloat,
    F: FnMut(T, usize, usize) -> Result<EntropyCurve<T>, FreeEnergyError>,
{
    let beta_c = critical_point::<T>(model).beta_c;
    let floor = T::from_f64_lossy(10.0 * NUMERICAL_FLOOR);
    let mut fitted = Vec::with_capacity(levels.len());
    for &(n_max, k_max) in levels {
        let mut points = Vec::with_capacity(eps_grid.len());
        for &eps in eps_grid {
            let beta = beta_c - eps;
            let curve = curve_for(beta, n_max, k_max)?;
            let report = excess_free_energy(beta, model, &curve)?;
            if report.point.f_excess < floor {
                return Err(FreeEnergyError::ExcessBelowFloor {
                    epsilon: eps.to_f64().unwrap_or(f64::NAN),
                    excess: report.point.f_excess.to_f64().unwrap_or(f64::NAN),
                });
            }
            points.push(OrderPoint {
                epsilon: eps,
                excess: report.point.f_excess,
                alpha_star: report.alpha_star,
            });
        }
        let xs: Vec<T> = points.iter().map(|p| p.epsilon.ln()).collect();
        let ys: Vec<T> = points.iter().map(|p| p.excess.ln()).collect();
        let (exponent, _) = linear_fit(&xs, &ys);
        fitted.push(OrderLevel { n_max, k_max, exponent, points });
    }
    Ok(OrderFit { model, beta_c, levels: fitted })
}

/// Log of the collapsed-ansatz lower bound on `Z^m_{L,β}` for square `L`:
/// restrict the partition sum to the single maximal-contact zigzag family
/// with `√L` columns.
///
/// `Z^u ≥ e^{β(L−2√L)}/|𝒲_L|` and `Z^{nu} ≥ (e^β/2)^L (2/(3e^{2β}))^{√L}`.
pub fn collapsed_ansatz_log_lower_bound<T: LogFloat>(
    model: ModelKind,
    length: usize,
    beta: T,
) -> T {
    let side = (length as f64).sqrt().round() as usize;
    assert_eq!(side * side, length, "bound needs a perfect-square length");
    let l = T::from_usize(length).expect("L");
    let s = T::from_usize(side).expect("√L");
    let two = T::from_f64_lossy(2.0);
    let three = T::from_f64_lossy(3.0);
    match model {
        ModelKind::Uniform => {
            beta * (l - two * s) - T::from_f64_lossy(count_paths(length).log_count())
        }
        ModelKind::NonUniform => {
            l * (beta - two.ln()) + s * ((two / three).ln() - two * beta)
        }
    }
}
