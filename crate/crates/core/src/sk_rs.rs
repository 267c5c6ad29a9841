//! Replica-symmetric Sherrington-Kirkpatrick mechanics.
//!
//! In the replica-symmetric region the SK Guerra action solves the free
//! Hamilton-Jacobi equation with boundary
//! `φ(x,0) = 2 ln 2 + 2 E_g ln cosh(βh + g√x) − x`. Its velocity is minus
//! the overlap `q̄`, fixed by
//!
//! ```text
//! q̄ = E_g tanh²(βh + g √(x + t q̄))
//! ```
//!
//! and trajectories are the straight lines `x = x0 − s E_g tanh²(βh + g√x0)`.
//! Lines stop being ordered where `t ∂_{x0} E_g tanh² = 1`; the margin
//! `1/3 + (2/3) t E sech² − t E sech⁴` measures the distance from that caustic.

use std::f64::consts::{FRAC_PI_2, LN_2};

use serde::Serialize;

use crate::error::{ensure_finite, ensure_non_negative, Error, Result};
use crate::hj_limit::sample_line;
use crate::numerics::{bisect, golden_section_min, log_cosh, normal_expectation, sech};
use crate::PlanePoint;

/// Fixed-point residual accepted by [`solve_qbar`].
pub const QBAR_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 10_000;
const DAMPING: f64 = 0.5;

/// Point `(x, t)` of the SK plane together with the field `βh`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SkParams {
    x: f64,
    t: f64,
    beta_h: f64,
}

impl SkParams {
    /// `x` and `t` enter under square roots and must be non-negative.
    pub fn new(x: f64, t: f64, beta_h: f64) -> Result<Self> {
        ensure_non_negative("x", x)?;
        ensure_non_negative("t", t)?;
        ensure_finite("beta_h", beta_h)?;
        Ok(SkParams { x, t, beta_h })
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }

    #[inline]
    pub fn beta_h(&self) -> f64 {
        self.beta_h
    }
}

/// Integrands available to [`gaussian_expectation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussianKind {
    LogCosh,
    TanhSq,
    SechSq,
    Sech4,
}

impl GaussianKind {
    fn eval(self, z: f64) -> f64 {
        match self {
            GaussianKind::LogCosh => log_cosh(z),
            GaussianKind::TanhSq => z.tanh().powi(2),
            GaussianKind::SechSq => sech(z).powi(2),
            GaussianKind::Sech4 => sech(z).powi(4),
        }
    }
}

/// `E_g f(βh + g√v)` for a standard Gaussian `g`, by a trapezoid rule
/// whose step follows the distance `π/(2√v)` from the real axis to the
/// poles of `tanh`. `v = 0` returns `f(βh)`.
pub fn gaussian_expectation(kind: GaussianKind, beta_h: f64, v: f64) -> Result<f64> {
    ensure_finite("beta_h", beta_h)?;
    ensure_non_negative("v", v)?;
    Ok(expectation(kind, beta_h, v))
}

fn expectation(kind: GaussianKind, beta_h: f64, v: f64) -> f64 {
    if v == 0.0 {
        return kind.eval(beta_h);
    }
    let s = v.sqrt();
    normal_expectation(|g| kind.eval(beta_h + g * s), FRAC_PI_2 / s)
}

/// `∂_v E_g tanh²(βh + g√v) = 3 E sech⁴ − 2 E sech²`, by Gaussian
/// integration by parts.
fn tanh_sq_slope(beta_h: f64, v: f64) -> f64 {
    3.0 * expectation(GaussianKind::Sech4, beta_h, v) - 2.0 * expectation(GaussianKind::SechSq, beta_h, v)
}

fn overlap_map(p: &SkParams, q: f64) -> f64 {
    expectation(GaussianKind::TanhSq, p.beta_h, p.x + p.t * q)
}

/// Replica-symmetric overlap `q̄(x, t)`.
///
/// Damped fixed-point iteration (`α = 1/2`); each step also tries a Newton
/// update and keeps it when it lowers the residual, which removes the
/// critical slowing down near `t = 1`. At `βh = 0, x = 0, t > 1` the
/// iteration starts from `q = 1` so the nonzero root is selected.
pub fn solve_qbar(p: SkParams) -> Result<f64> {
    let residual = |q: f64| q - overlap_map(&p, q);
    let mut q = if p.beta_h == 0.0 && p.x == 0.0 && p.t > 1.0 {
        1.0
    } else {
        overlap_map(&p, 0.0)
    };
    if p.t == 0.0 {
        return Ok(q);
    }
    let mut r = residual(q);
    for _ in 0..MAX_ITERATIONS {
        if r.abs() < QBAR_TOLERANCE {
            return Ok(q);
        }
        let damped = q - DAMPING * r;
        let mut next = damped;
        let mut next_r = residual(damped);
        let slope = 1.0 - p.t * tanh_sq_slope(p.beta_h, p.x + p.t * q);
        if slope > 0.0 {
            let newton = q - r / slope;
            if newton > 0.0 && newton <= 1.0 {
                let newton_r = residual(newton);
                if newton_r.abs() < next_r.abs() {
                    next = newton;
                    next_r = newton_r;
                }
            }
        }
        q = next;
        r = next_r;
    }
    if r.abs() < QBAR_TOLERANCE {
        return Ok(q);
    }
    Err(Error::NotConverged {
        method: "overlap fixed point",
        iterations: MAX_ITERATIONS,
        estimate: r.abs(),
    })
}

/// Replica-symmetric solution at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsSolution {
    pub q_bar: f64,
    pub phi_rs: f64,
    /// `A_RS = φ_RS/2 + t/4`, filled only at `x = 0` (where `t = β²`).
    pub pressure: Option<f64>,
    pub caustic_margin: f64,
    pub y_star: f64,
    /// Velocity `−q̄`.
    pub u: f64,
}

/// Boundary datum `2 ln 2 + 2 E_g ln cosh(βh + g√y) − y`.
fn boundary_action(beta_h: f64, y: f64) -> f64 {
    2.0 * LN_2 + 2.0 * expectation(GaussianKind::LogCosh, beta_h, y) - y
}

/// Replica-symmetric Guerra action, launch point and caustic margin.
///
/// The action is the Hopf-Lax value `t q̄²/2 + φ(y*, 0)` at
/// `y* = x + t q̄`, with the same doubled `ln 2` and `ln cosh`
/// coefficients as the boundary datum.
pub fn rs_action(p: SkParams) -> Result<RsSolution> {
    let q_bar = solve_qbar(p)?;
    let y_star = p.x + p.t * q_bar;
    let phi_rs = 0.5 * p.t * q_bar * q_bar + boundary_action(p.beta_h, y_star);
    Ok(RsSolution {
        q_bar,
        phi_rs,
        pressure: (p.x == 0.0).then(|| 0.5 * phi_rs + 0.25 * p.t),
        caustic_margin: launch_margin(y_star, p.t, p.beta_h)?,
        y_star,
        u: -q_bar,
    })
}

/// Replica-symmetric SK pressure with its reconstruction check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsPressure {
    pub beta: f64,
    pub h: f64,
    pub q_bar: f64,
    /// `ln 2 + E_g ln cosh(βh + gβ√q̄) + (β²/4)(1 − q̄)²`.
    pub pressure: f64,
    /// `φ_RS(0, β²)/2 + β²/4`.
    pub reconstruction: f64,
    pub discrepancy: f64,
}

/// `A_RS(β, h)` in closed form, cross-checked against the Guerra action.
pub fn rs_pressure(beta: f64, h: f64) -> Result<RsPressure> {
    ensure_non_negative("beta", beta)?;
    ensure_finite("h", h)?;
    let t = beta * beta;
    let solution = rs_action(SkParams::new(0.0, t, beta * h)?)?;
    let q = solution.q_bar;
    let pressure =
        LN_2 + expectation(GaussianKind::LogCosh, beta * h, t * q) + 0.25 * t * (1.0 - q).powi(2);
    let reconstruction = 0.5 * solution.phi_rs + 0.25 * t;
    Ok(RsPressure {
        beta,
        h,
        q_bar: q,
        pressure,
        reconstruction,
        discrepancy: (pressure - reconstruction).abs(),
    })
}

/// `1/3 + (2/3) t E sech²(βh + g√x0) − t E sech⁴(βh + g√x0)`: non-negative
/// exactly when the trajectory map `x0 ↦ x0 − t E tanh²` is increasing at
/// `x0`.
pub fn launch_margin(x0: f64, t: f64, beta_h: f64) -> Result<f64> {
    ensure_non_negative("x0", x0)?;
    ensure_non_negative("t", t)?;
    ensure_finite("beta_h", beta_h)?;
    let sech2 = expectation(GaussianKind::SechSq, beta_h, x0);
    let sech4 = expectation(GaussianKind::Sech4, beta_h, x0);
    Ok(1.0 / 3.0 + 2.0 / 3.0 * t * sech2 - t * sech4)
}

/// Caustic margin at the launch point `x + t q̄` of the trajectory through
/// `params`; zero on the caustic.
pub fn caustic_margin(p: SkParams) -> Result<f64> {
    let q = solve_qbar(p)?;
    launch_margin(p.x + p.t * q, p.t, p.beta_h)
}

/// How the caustic was located by [`caustic_root`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    /// The margin changes sign; found by bisection.
    Crossing,
    /// The margin touches zero without changing sign; found by minimizing it.
    Touching,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CausticRoot {
    pub t: f64,
    pub margin: f64,
    pub kind: RootKind,
}

/// Margin values below this count as touching the caustic.
pub const TOUCH_TOLERANCE: f64 = 1e-12;

/// Locates the caustic along `t ∈ [t_lo, t_hi]` at fixed `x` and `βh`.
///
/// Returns `None` when the margin stays strictly positive (or strictly
/// negative) on the whole bracket.
pub fn caustic_root(x: f64, beta_h: f64, t_lo: f64, t_hi: f64) -> Result<Option<CausticRoot>> {
    ensure_non_negative("t_lo", t_lo)?;
    ensure_finite("t_hi", t_hi)?;
    if t_hi <= t_lo {
        return Err(Error::invalid("t_hi", format!("must exceed t_lo = {t_lo}, got {t_hi}")));
    }
    let margin = |t: f64| SkParams::new(x, t, beta_h).and_then(caustic_margin);
    let (lo_m, hi_m) = (margin(t_lo)?, margin(t_hi)?);
    if lo_m == 0.0 || hi_m == 0.0 || lo_m.signum() != hi_m.signum() {
        // bisect wants an infallible closure; errors surface on re-evaluation
        let t = bisect(|t| margin(t).unwrap_or(f64::NAN), t_lo, t_hi)?;
        return Ok(Some(CausticRoot {
            t,
            margin: margin(t)?,
            kind: RootKind::Crossing,
        }));
    }
    let sign = lo_m.signum();
    let (t, m) = golden_section_min(|t| margin(t).map(|m| sign * m), t_lo, t_hi, 1e-14)?;
    if m.abs() <= TOUCH_TOLERANCE {
        Ok(Some(CausticRoot {
            t,
            margin: sign * m,
            kind: RootKind::Touching,
        }))
    } else {
        Ok(None)
    }
}

/// Replica-symmetric trajectory `x = x0 − s E_g tanh²(βh + g√x0)`.
pub fn rs_characteristic(x0: f64, t_max: f64, n_points: usize, beta_h: f64) -> Result<Vec<PlanePoint>> {
    ensure_non_negative("x0", x0)?;
    ensure_finite("beta_h", beta_h)?;
    sample_line(x0, -expectation(GaussianKind::TanhSq, beta_h, x0), t_max, n_points)
}

/// Launch grid census for replica-symmetric trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsCrossingScan {
    pub t: f64,
    pub beta_h: f64,
    pub min_launch_margin: f64,
    pub crossings: usize,
}

/// Launches `n_launch` trajectories uniformly on `[x0_lo, x0_hi]` and counts
/// pairwise crossings before time `t`, alongside the smallest launch margin.
pub fn rs_crossing_scan(t: f64, beta_h: f64, x0_lo: f64, x0_hi: f64, n_launch: usize) -> Result<RsCrossingScan> {
    ensure_non_negative("x0_lo", x0_lo)?;
    if n_launch < 2 || x0_hi <= x0_lo {
        return Err(Error::invalid("n_launch", "need at least 2 launch points on a non-empty range"));
    }
    let mut lines = Vec::with_capacity(n_launch);
    let mut min_launch_margin = f64::INFINITY;
    for i in 0..n_launch {
        let x0 = x0_lo + (x0_hi - x0_lo) * i as f64 / (n_launch - 1) as f64;
        lines.push((x0, -expectation(GaussianKind::TanhSq, beta_h, x0)));
        min_launch_margin = min_launch_margin.min(launch_margin(x0, t, beta_h)?);
    }
    Ok(RsCrossingScan {
        t,
        beta_h,
        min_launch_margin,
        crossings: crate::hj_limit::crossing_pairs(&lines, t),
    })
}
