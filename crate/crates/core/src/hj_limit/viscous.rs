//! Cole-Hopf representation of the finite-`N` solution.
//!
//! `e^{−N φ_N}` solves the heat equation with conductivity `1/(2N)` and
//! initial datum `(2 cosh x)^N`, so `φ_N` is a Gaussian convolution:
//!
//! ```text
//! φ_N(x,t) = −(1/N) ln[ √(N/t) ∫ dy/√(2π) exp(−N((x−y)²/(2t) − ln 2 − ln cosh y)) ]
//! ```
//!
//! The integrand is shifted by its maximum and folded about `y = x`, which
//! keeps the odd part of the velocity numerator exactly antisymmetric.

use crate::error::{Error, Result};
use crate::numerics::integrate_adaptive;
use crate::PlanePoint;

use super::lax::{objective, objective_minimum};

const REL_TOL: f64 = 1e-13;

struct FoldedWeight {
    x: f64,
    t: f64,
    n: f64,
    shift: f64,
    breakpoints: Vec<f64>,
}

impl FoldedWeight {
    fn new(p: PlanePoint, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "system size must be at least 1"));
        }
        let (x, t) = (p.x(), p.t());
        if t == 0.0 {
            return Err(Error::invalid(
                "t",
                "the Gaussian representation needs t > 0; use the boundary value −ln 2 − ln cosh x",
            ));
        }
        let nf = n as f64;
        let (shift, minimizers) = objective_minimum(x, t)?;
        let half_width = 10.0 / (nf * t.recip().min(1.0)).sqrt() + t + 5.0;
        let peak = (t / nf).sqrt();
        let mut breakpoints = vec![0.0, half_width];
        for y in minimizers {
            let s = (y - x).abs();
            for c in [s - 8.0 * peak, s, s + 8.0 * peak] {
                if c > 0.0 && c < half_width {
                    breakpoints.push(c);
                }
            }
        }
        breakpoints.sort_by(|a, b| a.total_cmp(b));
        breakpoints.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * half_width);
        Ok(FoldedWeight {
            x,
            t,
            n: nf,
            shift,
            breakpoints,
        })
    }

    #[inline]
    fn weight(&self, y: f64) -> f64 {
        (-self.n * (objective(self.x, self.t, y) - self.shift)).exp()
    }

    fn mass(&self) -> Result<f64> {
        let q = integrate_adaptive(
            |s| self.weight(self.x + s) + self.weight(self.x - s),
            &self.breakpoints,
            0.0,
            REL_TOL,
        )?;
        Ok(q.value)
    }

    fn velocity_numerator(&self, mass: f64) -> Result<f64> {
        let q = integrate_adaptive(
            |s| (s / self.t) * (self.weight(self.x - s) - self.weight(self.x + s)),
            &self.breakpoints,
            REL_TOL * mass,
            0.0,
        )?;
        Ok(q.value)
    }
}

/// `φ_N(x, t)` from the Gaussian-integral representation; `t > 0`.
pub fn viscous_action(p: PlanePoint, n: usize) -> Result<f64> {
    let w = FoldedWeight::new(p, n)?;
    let mass = w.mass()?;
    let prefactor = 0.5 * (w.n / (2.0 * std::f64::consts::PI * w.t)).ln();
    Ok(w.shift - (prefactor + mass.ln()) / w.n)
}

/// `u_N(x, t)` as a ratio of Gaussian integrals. At `t = 0` returns the
/// Burgers boundary datum `−tanh x`.
pub fn viscous_velocity(p: PlanePoint, n: usize) -> Result<f64> {
    if p.t() == 0.0 {
        if n == 0 {
            return Err(Error::invalid("n", "system size must be at least 1"));
        }
        return Ok(-p.x().tanh());
    }
    let w = FoldedWeight::new(p, n)?;
    let mass = w.mass()?;
    Ok(w.velocity_numerator(mass)? / mass)
}
