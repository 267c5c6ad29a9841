use serde::Serialize;

use crate::error::{ensure_finite, ensure_non_negative, Error, Result};
use crate::PlanePoint;

use super::lax::fold_launch_point;

/// Straight trajectory `x = x0 − s tanh x0` sampled on `s ∈ [0, t_max]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Characteristic {
    pub x0: f64,
    pub points: Vec<PlanePoint>,
}

/// Samples a straight line `x = x0 + slope·s` uniformly in `s`.
pub(crate) fn sample_line(x0: f64, slope: f64, t_max: f64, n_points: usize) -> Result<Vec<PlanePoint>> {
    ensure_finite("x0", x0)?;
    ensure_non_negative("t_max", t_max)?;
    if n_points < 2 {
        return Err(Error::invalid("n_points", format!("need at least 2, got {n_points}")));
    }
    let last = (n_points - 1) as f64;
    (0..n_points)
        .map(|i| {
            let s = t_max * i as f64 / last;
            PlanePoint::new(x0 + slope * s, s)
        })
        .collect()
}

/// Curie-Weiss characteristic launched from `x0`.
pub fn characteristic(x0: f64, t_max: f64, n_points: usize) -> Result<Characteristic> {
    Ok(Characteristic {
        x0,
        points: sample_line(x0, -x0.tanh(), t_max, n_points)?,
    })
}

/// Boundary of the intersection-free region on the `x0 >= 0` sheet:
/// `x_c(t) = atanh(√((t−1)/t)) − √(t(t−1))`, for `t > 1`.
///
/// It is the image at time `t` of the fold launch point; the mirrored
/// boundary of the `x0 <= 0` sheet is `−x_c(t)`.
pub fn critical_line(t: f64) -> Result<f64> {
    ensure_finite("t", t)?;
    if t <= 1.0 {
        return Err(Error::invalid(
            "t",
            format!("characteristics never intersect for t <= 1, got {t}"),
        ));
    }
    Ok(fold_launch_point(t) - (t * (t - 1.0)).sqrt())
}

/// Number of pairs among the lines `x = x0 + slope·s` that meet at some
/// `0 < s < horizon`.
pub fn crossing_pairs(lines: &[(f64, f64)], horizon: f64) -> usize {
    let mut count = 0;
    for (i, &(a0, a1)) in lines.iter().enumerate() {
        for &(b0, b1) in &lines[i + 1..] {
            let ds = a1 - b1;
            if ds == 0.0 {
                continue;
            }
            let s = (b0 - a0) / ds;
            if s > 0.0 && s < horizon {
                count += 1;
            }
        }
    }
    count
}

/// Pairwise-intersection census of the `x0 >= 0` characteristics at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingScan {
    pub t: f64,
    /// `x_c(t)`, the image of the fold launch point.
    pub critical_x: f64,
    /// Crossings before `t` among lines launched from `x0 >= y_c`, whose
    /// images at time `t` cover `x >= x_c(t)`.
    pub regular_side: usize,
    /// Crossings before `t` among lines launched from `0 <= x0 < y_c`,
    /// whose images at time `t` lie in `x < x_c(t)`.
    pub folded_side: usize,
    pub n_launch: usize,
}

/// Launches `n_launch` characteristics on each side of the fold point
/// `y_c(t)` (the regular side spans `[y_c, y_c + 4]`) and counts pairwise
/// crossings before time `t`.
pub fn crossing_scan(t: f64, n_launch: usize) -> Result<CrossingScan> {
    let critical_x = critical_line(t)?;
    if n_launch < 2 {
        return Err(Error::invalid("n_launch", format!("need at least 2, got {n_launch}")));
    }
    let yc = fold_launch_point(t);
    let step = 1.0 / n_launch as f64;
    let line = |x0: f64| (x0, -x0.tanh());
    let regular: Vec<_> = (0..n_launch).map(|i| line(yc + 4.0 * i as f64 * step)).collect();
    let folded: Vec<_> = (0..n_launch).map(|i| line(yc * i as f64 * step)).collect();
    Ok(CrossingScan {
        t,
        critical_x,
        regular_side: crossing_pairs(&regular, t),
        folded_side: crossing_pairs(&folded, t),
        n_launch,
    })
}
