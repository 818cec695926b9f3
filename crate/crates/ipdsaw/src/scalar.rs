//! Floating-point scalar abstraction and log-domain primitives.
//!
//! Every probability in this crate lives in log domain: constrained return
//! probabilities underflow `f64` already around sixty steps, so tables store
//! `log p` with `-inf` encoding the empty event. The helpers here are generic
//! over the scalar so the same dynamic programs run in `f32` or `f64`;
//! concrete aliases are exported from the crate root.

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar usable in log-domain tables: `f32` or `f64`.
pub trait LogFloat:
    Float + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for lossy conversion from `f64` (grid coordinates, β values).
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl LogFloat for f32 {}
impl LogFloat for f64 {}

/// `log(exp(a) + exp(b))` without overflow.
///
/// `-inf` arguments are passed through untouched, so empty DP cells combine
/// exactly: `log_add_exp(-inf, x) == x` bit for bit. This matters for the
/// cells that must stay exact, e.g. the zero-area diagonal of the walk table.
pub fn log_add_exp<T: LogFloat>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log Σ exp(terms)` via the max trick with compensated accumulation.
pub fn log_sum_exp<T: LogFloat>(terms: &[T]) -> T {
    let max = terms.iter().fold(T::neg_infinity(), |m, &t| m.max(t));
    if max == T::neg_infinity() || max == T::infinity() {
        return max;
    }
    let mut sum = NeumaierSum::default();
    for &t in terms {
        sum.add((t - max).exp());
    }
    max + sum.total().ln()
}

/// Neumaier's compensated summation.
///
/// Used wherever the reduction order must not leak into reported statistics
/// (sampler aggregation) and for the exponential sums inside [`log_sum_exp`].
#[derive(Clone, Copy, Debug)]
pub struct NeumaierSum<T> {
    sum: T,
    compensation: T,
}

impl<T: LogFloat> Default for NeumaierSum<T> {
    fn default() -> Self {
        Self { sum: T::zero(), compensation: T::zero() }
    }
}

impl<T: LogFloat> NeumaierSum<T> {
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn total(&self) -> T {
        self.sum + self.compensation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_agrees_with_direct_sum() {
        let x = log_add_exp(0.3f64.ln(), 0.4f64.ln());
        assert!((x - 0.7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_add_exp_passes_neg_infinity_through_exactly() {
        let v = -123.456_789_f64;
        assert_eq!(log_add_exp(f64::NEG_INFINITY, v), v);
        assert_eq!(log_add_exp(v, f64::NEG_INFINITY), v);
        assert_eq!(
            log_add_exp(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn log_add_exp_handles_extreme_magnitudes() {
        let x = log_add_exp(-1e300, 0.0);
        assert_eq!(x, 0.0);
        let y: f64 = log_add_exp(-745.0, -745.0);
        assert!((y - (-745.0 + std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_matches_pairwise_reduction() {
        let terms: Vec<f64> = (0..100).map(|i| -0.37 * i as f64).collect();
        let direct: f64 = terms.iter().map(|t| t.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&terms) - direct).abs() < 1e-13);
    }

    #[test]
    fn log_sum_exp_of_empty_and_all_empty_is_neg_infinity() {
        assert_eq!(log_sum_exp::<f64>(&[]), f64::NEG_INFINITY);
        assert_eq!(
            log_sum_exp(&[f64::NEG_INFINITY, f64::NEG_INFINITY]),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn neumaier_recovers_cancellation_error() {
        let mut s = NeumaierSum::default();
        s.add(1.0f64);
        s.add(1e100);
        s.add(1.0);
        s.add(-1e100);
        assert_eq!(s.total(), 2.0);
    }

    #[test]
    fn works_in_f32_too() {
        let x: f32 = log_add_exp(0.5f32.ln(), 0.5f32.ln());
        assert!(x.abs() < 1e-6);
    }
}
