use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::numerics::{log_cosh, safeguarded_newton, sech};
use crate::{PlanePoint, Side};

/// Which local minimizer of the Lax-Oleinik objective a solution sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Minimizer with `y* > 0` while a competing one exists.
    Plus,
    /// Minimizer with `y* < 0` while a competing one exists.
    Minus,
    /// The objective has a single local minimizer.
    Unique,
}

/// Inviscid solution at one plane point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaxSolution {
    pub y_star: f64,
    /// Limiting Guerra action `φ = −A`.
    pub phi: f64,
    /// Limiting velocity `u = −⟨m⟩`.
    pub u: f64,
    pub on_shock: bool,
    pub branch: Branch,
}

/// Rankine-Hugoniot states on either side of the shock line at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockJump {
    /// Limit from `x < 0`; equals `+m*(t)`.
    pub u_minus: f64,
    /// Limit from `x > 0`; equals `−m*(t)`.
    pub u_plus: f64,
}

/// Boundary datum `h(y) = −ln 2 − ln cosh y`.
#[inline]
pub(crate) fn boundary_action(y: f64) -> f64 {
    -LN_2 - log_cosh(y)
}

/// Lax-Oleinik objective `G(y) = (x − y)²/(2t) + h(y)`.
#[inline]
pub(crate) fn objective(x: f64, t: f64, y: f64) -> f64 {
    let d = x - y;
    d * d / (2.0 * t) + boundary_action(y)
}

/// Launch point where the map `x0 ↦ x0 − t tanh x0` folds:
/// `atanh(√((t − 1)/t))`, defined for `t > 1`.
pub fn fold_launch_point(t: f64) -> f64 {
    ((t - 1.0) / t).sqrt().atanh()
}

/// Local minimizers of `G`, i.e. the roots of `y − x − t tanh y` with
/// positive slope, in increasing order. At most two.
///
/// For `t > 1` the stationarity function has turning points at `±y_c`
/// (the fold launch point), which split the line into three monotone pieces.
pub(crate) fn local_minimizers(x: f64, t: f64) -> Result<Vec<f64>> {
    let f = |y: f64| (y - x - t * y.tanh(), 1.0 - t * sech(y).powi(2));
    // every root satisfies |y − x| <= t
    let lo = x - t - 1.0;
    let hi = x + t + 1.0;
    if t <= 1.0 {
        return Ok(vec![safeguarded_newton(f, lo, hi, x)?]);
    }
    let yc = fold_launch_point(t);
    let mut roots = Vec::with_capacity(2);
    if lo < -yc && f(-yc).0 >= 0.0 {
        roots.push(safeguarded_newton(f, lo, -yc, x.min(-yc))?);
    }
    if hi > yc && f(yc).0 <= 0.0 {
        roots.push(safeguarded_newton(f, yc, hi, x.max(yc))?);
    }
    if roots.is_empty() {
        return Err(Error::NotConverged {
            method: "Lax-Oleinik minimizer bracketing",
            iterations: 0,
            estimate: f64::NAN,
        });
    }
    Ok(roots)
}

/// Lax-Oleinik solution of the free problem with boundary `−ln 2 − ln cosh`.
///
/// Exactly on the shock line (`x = 0, t > 1`) both minimizers `±y*` are
/// global and `side` picks the one-sided limit; `None` is rejected there.
/// At `t = 0` the boundary values are returned.
pub fn lax_action(p: PlanePoint, side: Option<Side>) -> Result<LaxSolution> {
    let (x, t) = (p.x(), p.t());
    if t == 0.0 {
        return Ok(LaxSolution {
            y_star: x,
            phi: boundary_action(x),
            u: -x.tanh(),
            on_shock: false,
            branch: Branch::Unique,
        });
    }
    let on_shock = p.on_shock_line();
    let minimizers = local_minimizers(x, t)?;
    let (y_star, branch) = match minimizers.as_slice() {
        [y] => (*y, Branch::Unique),
        [y_minus, y_plus] => {
            // G(y) − G(−y) = −2xy/t, so the global minimizer has the sign of x
            let chosen = if x > 0.0 {
                Side::Plus
            } else if x < 0.0 {
                Side::Minus
            } else {
                side.ok_or(Error::AmbiguousShock { t })?
            };
            match chosen {
                Side::Plus => (*y_plus, Branch::Plus),
                Side::Minus => (*y_minus, Branch::Minus),
            }
        }
        _ => unreachable!("at most two local minimizers"),
    };
    Ok(LaxSolution {
        y_star,
        phi: objective(x, t, y_star),
        u: (x - y_star) / t,
        on_shock,
        branch,
    })
}

/// Minimum value of the Lax-Oleinik objective (no branch choice needed).
pub(crate) fn objective_minimum(x: f64, t: f64) -> Result<(f64, Vec<f64>)> {
    let minimizers = local_minimizers(x, t)?;
    let min = minimizers
        .iter()
        .map(|&y| objective(x, t, y))
        .fold(f64::INFINITY, f64::min);
    Ok((min, minimizers))
}

/// Positive root `m*` of `m = tanh(t m)` for `t > 1`.
pub fn spontaneous_magnetization(t: f64) -> Result<f64> {
    ensure_finite("t", t)?;
    if t <= 1.0 {
        return Err(Error::invalid("t", format!("must be > 1 for a nonzero root, got {t}")));
    }
    let g = |m: f64| (m - (t * m).tanh(), 1.0 - t * sech(t * m).powi(2));
    // near the pitchfork m*² ≈ 3(t − 1)/t³; shrink until g < 0
    let seed = (3.0 * (t - 1.0) / t.powi(3)).sqrt().min(0.999);
    let mut lo = 0.5 * seed;
    while g(lo).0 >= 0.0 {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::NotConverged {
                method: "spontaneous magnetization bracketing",
                iterations: 0,
                estimate: lo,
            });
        }
    }
    safeguarded_newton(g, lo, 1.0, seed.max(lo))
}

/// Velocity `u` solving `u = −tanh(x − u t)`.
///
/// Off the shock line the root continuous in `x` is returned (its sign is
/// that of `−x`); on the shock line `side` selects `u_+ = −m*` (plus) or
/// `u_− = +m*` (minus). Solved in `u` by safeguarded Newton, independently
/// of the minimizer search used by [`lax_action`].
pub fn self_consistent_magnetization(p: PlanePoint, side: Side) -> Result<f64> {
    let (x, t) = (p.x(), p.t());
    if t == 0.0 {
        return Ok(-x.tanh());
    }
    let f = |u: f64| {
        let arg = x - u * t;
        (u + arg.tanh(), 1.0 + t * sech(arg).powi(2))
    };
    if x > 0.0 {
        safeguarded_newton(f, -1.0, 0.0, -x.tanh())
    } else if x < 0.0 {
        safeguarded_newton(f, 0.0, 1.0, -x.tanh())
    } else if t <= 1.0 {
        Ok(0.0)
    } else {
        let m = spontaneous_magnetization(t)?;
        Ok(-side.sign() * m)
    }
}

/// One-sided limits of the velocity across the shock at `t > 1`.
pub fn shock_jump(t: f64) -> Result<ShockJump> {
    let m = spontaneous_magnetization(t)?;
    Ok(ShockJump {
        u_minus: m,
        u_plus: -m,
    })
}

/// `∂_x u = −(1 − u²)/(1 − t(1 − u²))` off the shock, from implicit
/// differentiation of `u = −tanh(x − u t)`.
///
/// The denominator is `t` times the curvature of the Lax-Oleinik objective
/// at its minimizer, hence positive, so `u` strictly decreases in `x`.
pub fn velocity_slope(p: PlanePoint, side: Side) -> Result<f64> {
    let u = self_consistent_magnetization(p, side)?;
    let s = 1.0 - u * u;
    Ok(-s / (1.0 - p.t() * s))
}

/// Limit of `u` along the lines `x = ε(t − 1)` as `ε → 0` with the sign of
/// `side`. Lines with `ε > 0` cross `t = 0` at `−ε < 0` but reach the shock
/// from `x > 0`, so they produce `u_+`.
pub fn symmetry_breaking_limit(t: f64, side: Side) -> Result<f64> {
    ensure_finite("t", t)?;
    if t <= 1.0 {
        return Err(Error::invalid("t", format!("must be > 1, got {t}")));
    }
    const TOL: f64 = 1e-8;
    let mut previous: Option<f64> = None;
    let mut last_change = f64::INFINITY;
    for j in 1..=15 {
        let eps = side.sign() * 10f64.powi(-j);
        let u = self_consistent_magnetization(PlanePoint::new(eps * (t - 1.0), t)?, side)?;
        if let Some(prev) = previous {
            last_change = (u - prev).abs();
            if last_change < TOL {
                return Ok(u);
            }
        }
        previous = Some(u);
    }
    Err(Error::NotConverged {
        method: "symmetry-breaking epsilon ladder",
        iterations: 15,
        estimate: last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, t: f64) -> PlanePoint {
        PlanePoint::new(x, t).unwrap()
    }

    /// Fixed-point oracle for m = tanh(t m) by plain bisection.
    fn bisect_m_star(t: f64) -> f64 {
        let (mut lo, mut hi) = (1e-6, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid - (t * mid).tanh() < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn below_criticality_symmetric_point() {
        for &t in &[0.2, 0.5, 1.0] {
            let s = lax_action(pt(0.0, t), None).unwrap();
            assert_eq!(s.y_star, 0.0);
            assert_eq!(s.u, 0.0);
            assert!((s.phi + LN_2).abs() < 1e-15);
            assert_eq!(s.branch, Branch::Unique);
        }
    }

    #[test]
    fn shock_point_needs_side() {
        assert_eq!(
            lax_action(pt(0.0, 2.0), None).unwrap_err(),
            Error::AmbiguousShock { t: 2.0 }
        );
    }

    #[test]
    fn ordered_phase_at_zero_plus() {
        let m = bisect_m_star(2.0);
        assert!((m - 0.957_504).abs() < 1e-6);
        let s = lax_action(pt(0.0, 2.0), Some(Side::Plus)).unwrap();
        assert!(s.on_shock);
        assert_eq!(s.branch, Branch::Plus);
        assert!((s.u + m).abs() < 1e-12);
        // direct scan of the objective
        let scan_min = (0..=400_000)
            .map(|i| objective(0.0, 2.0, -4.0 + 8.0 * i as f64 / 400_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!((s.phi - scan_min).abs() < 1e-9);
        assert!((s.phi + 1.019_671).abs() < 1e-6, "{}", s.phi);
        let minus = lax_action(pt(0.0, 2.0), Some(Side::Minus)).unwrap();
        assert_eq!(minus.phi, s.phi);
        assert_eq!(minus.u, -s.u);
    }

    #[test]
    fn boundary_values() {
        let s = lax_action(pt(1.0, 0.0), None).unwrap();
        assert!((s.phi + 1.126_928).abs() < 1e-6);
        assert!((s.u + 1f64.tanh()).abs() < 1e-16);
    }

    #[test]
    fn self_consistency_branches() {
        assert_eq!(self_consistent_magnetization(pt(0.0, 0.5), Side::Plus).unwrap(), 0.0);
        assert_eq!(self_consistent_magnetization(pt(0.0, 0.5), Side::Minus).unwrap(), 0.0);
        let m = bisect_m_star(2.0);
        let u = self_consistent_magnetization(pt(0.0, 2.0), Side::Minus).unwrap();
        assert!((u - m).abs() < 1e-12);
        let u = self_consistent_magnetization(pt(-0.1, 2.0), Side::Plus).unwrap();
        assert!(u > 0.95 && u < 0.97);
        let lax = lax_action(pt(-0.1, 2.0), None).unwrap();
        assert!((u - lax.u).abs() < 1e-10);
    }

    #[test]
    fn jump_near_pitchfork_follows_series() {
        let t = 1.0001;
        let j = shock_jump(t).unwrap();
        let series = (3.0 * (t - 1.0) / t.powi(3)).sqrt();
        assert!((j.u_minus - series).abs() / series < 1e-3);
        assert!((j.u_minus - 0.0173).abs() < 1e-4);
        assert_eq!(j.u_plus * j.u_plus - j.u_minus * j.u_minus, 0.0);
        assert!(shock_jump(1.0).is_err());
    }

    #[test]
    fn epsilon_ladder_reaches_one_sided_limits() {
        let j = shock_jump(2.0).unwrap();
        let plus = symmetry_breaking_limit(2.0, Side::Plus).unwrap();
        let minus = symmetry_breaking_limit(2.0, Side::Minus).unwrap();
        assert!((plus - j.u_plus).abs() < 1e-8);
        assert!((minus - j.u_minus).abs() < 1e-8);
        assert!((plus + 0.957_504).abs() < 1e-6);
        let a = symmetry_breaking_limit(1.5, Side::Plus).unwrap();
        let b = symmetry_breaking_limit(1.5, Side::Minus).unwrap();
        assert!(a < 0.0 && b > 0.0 && (a + b).abs() < 1e-8);
    }

    #[test]
    fn entropy_slope_matches_finite_differences() {
        for (k, &(x, t)) in [(0.4, 0.5), (0.3, 2.0), (-1.2, 3.0), (0.05, 1.2)].iter().enumerate() {
            let h = 1e-5;
            let up = self_consistent_magnetization(pt(x + h, t), Side::Plus).unwrap();
            let dn = self_consistent_magnetization(pt(x - h, t), Side::Plus).unwrap();
            let fd = (up - dn) / (2.0 * h);
            let exact = velocity_slope(pt(x, t), Side::Plus).unwrap();
            assert!(exact < 0.0);
            assert!((fd - exact).abs() < 1e-6, "{x} {t}: {fd} vs {exact}");
            if k == 0 {
                // a `1 + t(1 − u²)` denominator does not reproduce the derivative
                let u = self_consistent_magnetization(pt(x, t), Side::Plus).unwrap();
                let plus_form = -(1.0 - u * u) / (1.0 + t * (1.0 - u * u));
                assert!((fd - plus_form).abs() > 0.1);
            }
        }
    }
}
