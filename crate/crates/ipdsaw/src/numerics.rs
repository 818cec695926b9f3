//! Small numerical routines: root bracketing, golden-section maximization,
//! and least-squares line fits on transformed coordinates.

use crate::scalar::LogFloat;

/// Bisection on a bracketing interval.
///
/// `f` must change sign between `lo` and `hi`. Iterates until the interval
/// width drops below `tol` (or 200 iterations, enough to exhaust `f64`).
pub fn bisect<T, F>(mut lo: T, mut hi: T, tol: T, mut f: F) -> T
where
    T: LogFloat,
    F: FnMut(T) -> T,
{
    let flo = f(lo);
    assert!(
        (flo <= T::zero()) != (f(hi) <= T::zero()),
        "bisect: no sign change on the bracket"
    );
    let lo_negative = flo <= T::zero();
    let two = T::one() + T::one();
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / two;
        if (f(mid) <= T::zero()) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
///
/// Returns `(argmax, max)`. With ~80 iterations the bracket contracts by
/// ~0.618^80, i.e. far below `f64` resolution for unit-scale intervals.
pub fn golden_section_max<T, F>(mut lo: T, mut hi: T, iterations: usize, mut f: F) -> (T, T)
where
    T: LogFloat,
    F: FnMut(T) -> T,
{
    let ratio = T::from_f64_lossy((5.0f64.sqrt() - 1.0) / 2.0);
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iterations {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    let two = T::one() + T::one();
    let mid = (lo + hi) / two;
    (mid, f(mid))
}

/// Ordinary least-squares fit `y ≈ slope·x + intercept`.
///
/// Panics on fewer than two points or a degenerate (constant-x) design.
pub fn linear_fit<T: LogFloat>(xs: &[T], ys: &[T]) -> (T, T) {
    assert!(xs.len() == ys.len() && xs.len() >= 2, "linear_fit: need ≥ 2 points");
    let n = T::from_usize(xs.len()).expect("point count");
    let mean_x = xs.iter().fold(T::zero(), |s, &x| s + x) / n;
    let mean_y = ys.iter().fold(T::zero(), |s, &y| s + y) / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx = sxx + (x - mean_x) * (x - mean_x);
        sxy = sxy + (x - mean_x) * (y - mean_y);
    }
    assert!(sxx > T::zero(), "linear_fit: degenerate design");
    let slope = sxy / sxx;
    (slope, mean_y - slope * mean_x)
}

/// Least-squares slope of `log(y)` against `log(x)`; all inputs must be > 0.
pub fn log_log_slope<T: LogFloat>(xs: &[T], ys: &[T]) -> T {
    let lx: Vec<T> = xs.iter().map(|&x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|&y| y.ln()).collect();
    linear_fit(&lx, &ly).0
}
