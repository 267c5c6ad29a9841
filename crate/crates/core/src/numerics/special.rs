//! Overflow-safe elementary functions.

use std::f64::consts::LN_2;

/// `ln cosh(y)` without overflow for large `|y|`.
#[inline]
pub fn log_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `sech(y) = 1 / cosh(y)`, returning 0 instead of overflowing.
#[inline]
pub fn sech(y: f64) -> f64 {
    let a = y.abs();
    if a > 700.0 {
        return 0.0;
    }
    let e = (-a).exp();
    2.0 * e / (1.0 + e * e)
}

/// `ln sum_i exp(v_i)` with a single max shift. Returns `-inf` for an
/// empty slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}
