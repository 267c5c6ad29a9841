//! Bracketed scalar root finding and one-dimensional minimization.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 400;

/// Bisection on `[lo, hi]`, which must bracket a sign change of `f`.
///
/// Runs until the bracket cannot be split any further in floating point, so
/// the result is the root to the last representable digit.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::invalid(
            "bracket",
            format!("f({lo}) = {f_lo} and f({hi}) = {f_hi} have the same sign"),
        ));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton's method kept inside a sign-change bracket; any step that leaves
/// the bracket (or fails to shrink it fast enough) is replaced by bisection.
///
/// `fdf` returns `(f(x), f'(x))`.
pub fn safeguarded_newton<F>(fdf: F, mut lo: f64, mut hi: f64, start: f64) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let (f_lo, _) = fdf(lo);
    let (f_hi, _) = fdf(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::invalid(
            "bracket",
            format!("f({lo}) = {f_lo} and f({hi}) = {f_hi} have the same sign"),
        ));
    }
    let lo_sign = f_lo.signum();
    let mut x = if start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };
    let mut last_width = hi - lo;
    for _ in 0..MAX_BISECTIONS {
        let (fx, dfx) = fdf(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == lo_sign {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let width = hi - lo;
        let next = if dfx != 0.0 && newton > lo && newton < hi && width < 0.75 * last_width {
            newton
        } else {
            0.5 * (lo + hi)
        };
        last_width = width;
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        if next <= lo || next >= hi {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::NotConverged {
        method: "safeguarded Newton",
        iterations: MAX_BISECTIONS,
        estimate: hi - lo,
    })
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmin, min)`.
pub fn golden_section_min<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while hi - lo > tol {
        iterations += 1;
        if iterations > 500 {
            return Err(Error::NotConverged {
                method: "golden-section search",
                iterations,
                estimate: hi - lo,
            });
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok((x, f(x)?))
}
