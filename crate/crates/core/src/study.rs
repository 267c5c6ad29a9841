//! Finite-size convergence studies.
//!
//! Each report evaluates a quantity over an increasing list of system sizes,
//! compares it with its limit (or tracks a residual that should vanish), and
//! fits the log-log slope by least squares.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sk_finite::{sk_identity_residuals, IdentityResiduals};
use crate::sk_rs::SkParams;
use crate::{cw_exact, hj_limit, PlanePoint, Side};

/// Least-squares slope of `ln |y|` against `ln n`.
pub fn loglog_slope(ns: &[f64], ys: &[f64]) -> Result<f64> {
    if ns.len() != ys.len() || ns.len() < 2 {
        return Err(Error::invalid("ns", "need at least two (n, y) pairs of equal length"));
    }
    if ns.iter().chain(ys).any(|v| *v == 0.0 || !v.is_finite()) || ns.iter().any(|&n| n < 0.0) {
        return Err(Error::invalid("ys", "log-log fit needs finite, nonzero values and positive n"));
    }
    let lx: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

fn check_sizes(ns: &[usize]) -> Result<()> {
    if ns.len() < 3 {
        return Err(Error::invalid("n_list", format!("need at least 3 sizes, got {}", ns.len())));
    }
    if ns[0] == 0 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("n_list", "sizes must be positive and strictly increasing"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub value: f64,
    pub limit: f64,
    pub abs_error: f64,
    /// `abs_error / previous abs_error`; absent on the first row.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub quantity: &'static str,
    pub x: f64,
    pub t: f64,
    pub rows: Vec<ConvergenceRow>,
    pub slope: f64,
}

fn report(quantity: &'static str, p: PlanePoint, ns: &[usize], limit: f64, value: impl Fn(usize) -> Result<f64>) -> Result<ConvergenceReport> {
    check_sizes(ns)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let v = value(n)?;
        let abs_error = (v - limit).abs();
        rows.push(ConvergenceRow {
            n,
            value: v,
            limit,
            abs_error,
            ratio: rows.last().map(|r| abs_error / r.abs_error),
        });
    }
    let sizes: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let errors: Vec<f64> = rows.iter().map(|r| r.abs_error).collect();
    Ok(ConvergenceReport {
        quantity,
        x: p.x(),
        t: p.t(),
        slope: loglog_slope(&sizes, &errors)?,
        rows,
    })
}

/// `|φ_N − φ|` with `φ_N` from the exact binomial sum. `side` only matters
/// on the shock line.
pub fn cw_action_convergence(p: PlanePoint, ns: &[usize], side: Side) -> Result<ConvergenceReport> {
    let limit = hj_limit::lax_action(p, Some(side))?.phi;
    report("cw-action", p, ns, limit, |n| Ok(cw_exact::exact_fields(p, n, 4)?.phi))
}

/// `|u_N − u|` with `u_N = −⟨m⟩` from the exact binomial sum.
pub fn cw_velocity_convergence(p: PlanePoint, ns: &[usize], side: Side) -> Result<ConvergenceReport> {
    let limit = hj_limit::lax_action(p, Some(side))?.u;
    report("cw-velocity", p, ns, limit, |n| Ok(cw_exact::exact_fields(p, n, 4)?.u))
}

/// `N·V_N` against `N`; the `ratio` column tracks consecutive changes.
pub fn cw_potential_scaling(p: PlanePoint, ns: &[usize]) -> Result<ConvergenceReport> {
    report("cw-potential", p, ns, 0.0, |n| {
        Ok(n as f64 * cw_exact::exact_fields(p, n, 4)?.potential)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub params: SkParams,
    pub seed: u64,
    pub n_samples: usize,
    pub rows: Vec<IdentityResiduals>,
    /// Log-log slope of `|p4|` against `n`.
    pub p4_slope: f64,
}

/// Identity residuals over a list of system sizes, one seed for all.
pub fn sk_identity_convergence(params: SkParams, ns: &[usize], n_samples: usize, seed: u64) -> Result<IdentityReport> {
    check_sizes(ns)?;
    let rows = ns
        .iter()
        .map(|&n| sk_identity_residuals(params, n, n_samples, seed))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let p4: Vec<f64> = rows.iter().map(|r| r.p4.value).collect();
    Ok(IdentityReport {
        params,
        seed,
        n_samples,
        p4_slope: loglog_slope(&sizes, &p4)?,
        rows,
    })
}
