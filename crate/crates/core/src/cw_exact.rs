//! Exact finite-`N` Curie-Weiss thermodynamics.
//!
//! The Gibbs weight is taken as `exp(N (t m²/2 + x m))` with
//! `m = (1/N) Σ σ_i`, so the law of `m` is a reweighted binomial on the
//! `N + 1` values `m_k = (2k − N)/N`. Every quantity here is a finite sum
//! over that law, evaluated in log space with one max shift.
//!
//! With this convention the Guerra action `φ_N = −(1/N) ln Z_N` satisfies
//! the viscous Hamilton-Jacobi equation
//! `∂_t φ_N + ½(∂_x φ_N)² − (1/2N) ∂²_x φ_N = 0` identically, which the
//! residual functions below check by finite differences.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};
use crate::PlanePoint;

/// Default central-difference step for the residual checks.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Exact finite-`N` fields at one plane point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactCwFields {
    pub n: usize,
    /// Guerra action `φ_N = −A_N`.
    pub phi: f64,
    /// Velocity `u_N = −⟨m⟩`.
    pub u: f64,
    /// Potential `V_N = ½ Var(m)`.
    pub potential: f64,
    /// Raw moments; `moments[k] = ⟨m^k⟩` for `k = 0..=k_max` (`moments[0] = 1`).
    pub moments: Vec<f64>,
}

/// Momentum/energy conservation residuals built from the moments of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationResiduals {
    /// `⟨m³⟩ − 3⟨m⟩⟨m²⟩ + 2⟨m⟩³`
    pub r1: f64,
    /// `(⟨m⁴⟩ − ⟨m²⟩²) − 2⟨m⟩⟨m³⟩ + 2⟨m⟩²⟨m²⟩`
    pub r2: f64,
    /// `⟨m⁴⟩ − ⟨m²⟩²`
    pub r3: f64,
}

/// Law of the magnetization at size `n`.
struct MagnetizationLaw {
    n: usize,
    /// `ln Σ_k C(N,k) exp(N(t m_k²/2 + x m_k))`
    log_norm: f64,
    probs: Vec<f64>,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "system size must be at least 1"));
    }
    Ok(())
}

#[inline]
fn magnetization(k: usize, n: usize) -> f64 {
    // exact negation under k -> n - k
    (2 * k as i64 - n as i64) as f64 / n as f64
}

/// `ln C(n, k)` for all `k`, mirrored so the table is exactly symmetric.
fn log_binomials(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for k in 0..n / 2 {
        out[k + 1] = out[k] + ((n - k) as f64).ln() - ((k + 1) as f64).ln();
    }
    for k in 0..=n / 2 {
        out[n - k] = out[k];
    }
    out
}

/// Sums `f(k)` over `k = 0..=n` by mirror pairs `(k, n − k)`, so a summand
/// that is odd under the mirror sums to exactly zero.
fn mirror_sum<F: Fn(usize) -> f64>(n: usize, f: F) -> f64 {
    let mut total = 0.0;
    for k in 0..(n + 1) / 2 {
        total += f(k) + f(n - k);
    }
    if n % 2 == 0 {
        total += f(n / 2);
    }
    total
}

impl MagnetizationLaw {
    fn new(p: PlanePoint, n: usize) -> Result<Self> {
        check_size(n)?;
        let (x, t) = (p.x(), p.t());
        let nf = n as f64;
        let log_binom = log_binomials(n);
        let log_w: Vec<f64> = (0..=n)
            .map(|k| {
                let m = magnetization(k, n);
                log_binom[k] + nf * (0.5 * t * m * m + x * m)
            })
            .collect();
        let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = log_w.iter().map(|lw| (lw - max).exp()).collect();
        let z = mirror_sum(n, |k| weights[k]);
        let probs = weights.iter().map(|w| w / z).collect();
        Ok(MagnetizationLaw {
            n,
            log_norm: max + z.ln(),
            probs,
        })
    }

    fn raw_moment(&self, j: i32) -> f64 {
        let n = self.n;
        mirror_sum(n, |k| self.probs[k] * magnetization(k, n).powi(j))
    }

    fn central_moment(&self, mean: f64, j: i32) -> f64 {
        let n = self.n;
        mirror_sum(n, |k| self.probs[k] * (magnetization(k, n) - mean).powi(j))
    }
}

/// `A_N(x, t) = (1/N) ln Σ_σ exp(N(t m²/2 + x m))`.
pub fn log_partition(p: PlanePoint, n: usize) -> Result<f64> {
    let law = MagnetizationLaw::new(p, n)?;
    Ok(law.log_norm / n as f64)
}

/// Guerra action, velocity, potential and raw moments `⟨m^k⟩`, `k <= k_max`.
pub fn exact_fields(p: PlanePoint, n: usize, k_max: usize) -> Result<ExactCwFields> {
    if k_max < 4 {
        return Err(Error::invalid("k_max", format!("must be >= 4, got {k_max}")));
    }
    let law = MagnetizationLaw::new(p, n)?;
    let moments: Vec<f64> = (0..=k_max as i32).map(|j| law.raw_moment(j)).collect();
    let mean = moments[1];
    let variance = law.central_moment(mean, 2);
    Ok(ExactCwFields {
        n,
        phi: -law.log_norm / n as f64,
        u: -mean,
        potential: 0.5 * variance,
        moments,
    })
}

fn check_step(p: PlanePoint, step: f64) -> Result<()> {
    ensure_positive("step", step)?;
    if p.t() - step < 0.0 {
        return Err(Error::invalid(
            "step",
            format!("t - step = {} leaves the half-plane t >= 0", p.t() - step),
        ));
    }
    Ok(())
}

fn shifted(p: PlanePoint, dx: f64, dt: f64) -> Result<PlanePoint> {
    PlanePoint::new(p.x() + dx, p.t() + dt)
}

/// `|∂_t φ_N + ½(∂_x φ_N)² − (1/2N) ∂²_x φ_N|` by central differences of
/// the exact `φ_N`. Zero up to `O(step²)`.
pub fn hj_residual(p: PlanePoint, n: usize, step: f64) -> Result<f64> {
    check_step(p, step)?;
    check_size(n)?;
    let phi = |dx: f64, dt: f64| -> Result<f64> { Ok(-log_partition(shifted(p, dx, dt)?, n)?) };
    let h = step;
    let centre = phi(0.0, 0.0)?;
    let (xp, xm) = (phi(h, 0.0)?, phi(-h, 0.0)?);
    let (tp, tm) = (phi(0.0, h)?, phi(0.0, -h)?);
    let d_t = (tp - tm) / (2.0 * h);
    let d_x = (xp - xm) / (2.0 * h);
    let d_xx = (xp - 2.0 * centre + xm) / (h * h);
    Ok((d_t + 0.5 * d_x * d_x - d_xx / (2.0 * n as f64)).abs())
}

/// Residual of the continuity equation `(∂_t + u_N ∂_x) ln ρ_N = 2N V_N`
/// with density `ρ_N(x, t) = 2^{−N} Z_N` at coupling `2t`.
///
/// The velocity and potential are taken under the same doubled-coupling
/// measure, i.e. from [`exact_fields`] at `(x, 2t)`.
pub fn continuity_residual(p: PlanePoint, n: usize, step: f64) -> Result<f64> {
    check_step(p, step)?;
    check_size(n)?;
    let nf = n as f64;
    let log_rho = |dx: f64, dt: f64| -> Result<f64> {
        let q = PlanePoint::new(p.x() + dx, 2.0 * (p.t() + dt))?;
        Ok(nf * log_partition(q, n)? - nf * LN_2)
    };
    let h = step;
    let d_t = (log_rho(0.0, h)? - log_rho(0.0, -h)?) / (2.0 * h);
    let d_x = (log_rho(h, 0.0)? - log_rho(-h, 0.0)?) / (2.0 * h);
    let fields = exact_fields(PlanePoint::new(p.x(), 2.0 * p.t())?, n, 4)?;
    Ok((d_t + fields.u * d_x - 2.0 * nf * fields.potential).abs())
}

/// Conservation-law residuals; each is `O(1/N)` away from the shock line.
///
/// Evaluated through central moments of `m`; the identities
/// `r1 = κ₃`, `r2 = μ₄ − μ₂² + 2⟨m⟩μ₃` and
/// `r3 = μ₄ + 4⟨m⟩μ₃ + 4⟨m⟩²μ₂ − μ₂²` are algebraically equal to the raw
/// moment forms but avoid cancelling `O(1)` terms.
pub fn conservation_residuals(p: PlanePoint, n: usize) -> Result<ConservationResiduals> {
    let law = MagnetizationLaw::new(p, n)?;
    let mean = law.raw_moment(1);
    let c2 = law.central_moment(mean, 2);
    let c3 = law.central_moment(mean, 3);
    let c4 = law.central_moment(mean, 4);
    Ok(ConservationResiduals {
        r1: c3,
        r2: c4 - c2 * c2 + 2.0 * mean * c3,
        r3: c4 + 4.0 * mean * c3 + 4.0 * mean * mean * c2 - c2 * c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, t: f64) -> PlanePoint {
        PlanePoint::new(x, t).unwrap()
    }

    /// Sum over all 2^n spin configurations.
    fn brute_force_log_partition(x: f64, t: f64, n: usize) -> f64 {
        let nf = n as f64;
        let mut terms = Vec::with_capacity(1 << n);
        for c in 0u32..(1 << n) {
            let s: i32 = (0..n).map(|i| if c >> i & 1 == 1 { 1 } else { -1 }).sum();
            let m = s as f64 / nf;
            terms.push(nf * (0.5 * t * m * m + x * m));
        }
        crate::numerics::log_sum_exp(&terms) / nf
    }

    #[test]
    fn free_spins_give_log_two() {
        let a = log_partition(pt(0.0, 0.0), 10).unwrap();
        assert!((a - LN_2).abs() < 1e-15);
    }

    #[test]
    fn boundary_factorizes() {
        let a = log_partition(pt(1.0, 0.0), 7).unwrap();
        assert!((a - (LN_2 + f64::cosh(1.0).ln())).abs() < 1e-14);
        assert!((a - 1.126_928_0).abs() < 1e-7);
        let f = exact_fields(pt(1.0, 0.0), 7, 4).unwrap();
        assert!((f.phi + LN_2 + f64::cosh(1.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn binomial_sum_matches_enumeration() {
        let a = log_partition(pt(0.2, 0.5), 10).unwrap();
        let b = brute_force_log_partition(0.2, 0.5, 10);
        assert!(((a - b) / b).abs() < 1e-12, "{a} vs {b}");
        for &(x, t, n) in &[(-0.7, 1.3, 9), (0.0, 2.0, 12), (2.0, 0.1, 5)] {
            let a = log_partition(pt(x, t), n).unwrap();
            let b = brute_force_log_partition(x, t, n);
            assert!(((a - b) / b).abs() < 1e-12);
        }
    }

    #[test]
    fn large_n_does_not_overflow() {
        let a = log_partition(pt(0.5, 3.0), 10_000).unwrap();
        assert!(a.is_finite());
        let limit = -crate::hj_limit::lax_action(pt(0.5, 3.0), None).unwrap().phi;
        assert!((a - limit).abs() < 1e-4, "{a} vs {limit}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(log_partition(pt(0.0, 1.0), 0).is_err());
        assert!(exact_fields(pt(0.0, 1.0), 5, 3).is_err());
    }

    #[test]
    fn odd_moments_vanish_at_zero_field() {
        let f = exact_fields(pt(0.0, 1.5), 20, 6).unwrap();
        assert_eq!(f.moments[1], 0.0);
        assert_eq!(f.moments[3], 0.0);
        assert_eq!(f.moments[5], 0.0);
        assert_eq!(f.u, 0.0);
        let r = conservation_residuals(pt(0.0, 0.5), 16).unwrap();
        assert_eq!(r.r1, 0.0);
    }

    #[test]
    fn independent_spins_mean() {
        let f = exact_fields(pt(0.3, 0.0), 5, 4).unwrap();
        assert!((f.moments[1] - 0.3f64.tanh()).abs() < 1e-15);
        assert!((f.moments[1] - 0.291_312_6).abs() < 1e-7);
    }

    #[test]
    fn potential_is_half_variance() {
        for &(x, t, n) in &[(0.3, 2.0, 40), (-1.0, 0.4, 13), (0.0, 3.0, 64)] {
            let f = exact_fields(pt(x, t), n, 4).unwrap();
            let raw = 0.5 * (f.moments[2] - f.moments[1] * f.moments[1]);
            assert!(f.potential >= 0.0);
            assert!((f.potential - raw).abs() < 1e-14);
        }
    }

    /// At t = 0 the spins are independent, each with mean tanh x, so
    /// m = (2K − N)/N with K ~ Binomial(N, (1 + tanh x)/2).
    #[test]
    fn independent_spin_fourth_cumulant_oracle() {
        let (x, n) = (0.3f64, 5usize);
        let p = (1.0 + x.tanh()) / 2.0;
        let mut raw = [0.0f64; 5];
        for k in 0..=n {
            let binom = (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
            let w = binom * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
            let m = (2.0 * k as f64 - n as f64) / n as f64;
            for (j, r) in raw.iter_mut().enumerate() {
                *r += w * m.powi(j as i32);
            }
        }
        let r = conservation_residuals(pt(x, 0.0), n).unwrap();
        assert!((r.r3 - (raw[4] - raw[2] * raw[2])).abs() < 1e-14);
        let f = exact_fields(pt(x, 0.0), n, 4).unwrap();
        for j in 1..=4 {
            assert!((f.moments[j] - raw[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn central_forms_match_raw_forms() {
        let f = exact_fields(pt(0.3, 2.0), 30, 4).unwrap();
        let m = &f.moments;
        let r = conservation_residuals(pt(0.3, 2.0), 30).unwrap();
        let r1 = m[3] - 3.0 * m[1] * m[2] + 2.0 * m[1].powi(3);
        let r2 = (m[4] - m[2] * m[2]) - 2.0 * m[1] * m[3] + 2.0 * m[1] * m[1] * m[2];
        let r3 = m[4] - m[2] * m[2];
        assert!((r.r1 - r1).abs() < 1e-13);
        assert!((r.r2 - r2).abs() < 1e-13);
        assert!((r.r3 - r3).abs() < 1e-13);
    }

    #[test]
    fn hj_residual_small_and_second_order() {
        let r = hj_residual(pt(0.5, 1.0), 12, 1e-3).unwrap();
        assert!(r < 1e-5, "{r}");
        let coarse = hj_residual(pt(0.0, 0.5), 8, 1e-2).unwrap();
        let fine = hj_residual(pt(0.0, 0.5), 8, 1e-3).unwrap();
        let ratio = coarse / fine;
        assert!((80.0..120.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn hj_residual_preconditions() {
        assert!(hj_residual(pt(1.0, 0.0), 5, 1e-3).is_err());
        assert!(hj_residual(pt(1.0, 1.0), 5, 0.0).is_err());
        assert!(hj_residual(pt(1.0, 1.0), 5, -1e-3).is_err());
    }

    #[test]
    fn continuity_residual_small_and_second_order() {
        assert!(continuity_residual(pt(0.4, 0.3), 10, 1e-3).unwrap() < 1e-4);
        assert!(continuity_residual(pt(0.0, 0.2), 6, 1e-3).unwrap() < 1e-4);
        let coarse = continuity_residual(pt(0.4, 0.3), 10, 2e-2).unwrap();
        let fine = continuity_residual(pt(0.4, 0.3), 10, 1e-2).unwrap();
        let ratio = coarse / fine;
        assert!((4.0 * 0.8..=4.0 * 1.2).contains(&ratio), "ratio {ratio}");
    }

    /// In the ordered phase the third cumulant is O(1/N²), so it is N²·r1
    /// (not N·r1) that levels off; N·r3 levels off directly.
    #[test]
    fn conservation_scaling_in_ordered_phase() {
        let mut prev: Option<(f64, f64)> = None;
        for &n in &[20usize, 40, 80] {
            let r = conservation_residuals(pt(0.3, 2.0), n).unwrap();
            let nf = n as f64;
            let scaled = (nf * nf * r.r1.abs(), nf * r.r3.abs());
            if let Some(p) = prev {
                assert!(scaled.0 / p.0 > 0.5 && scaled.0 / p.0 < 1.5, "N² r1 {scaled:?} {p:?}");
                assert!(scaled.1 / p.1 > 0.5 && scaled.1 / p.1 < 1.5, "N r3 {scaled:?} {p:?}");
            }
            prev = Some(scaled);
        }
    }
}
