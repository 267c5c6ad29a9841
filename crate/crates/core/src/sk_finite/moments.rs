use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sk_rs::SkParams;

use super::disorder::DisorderSample;
use super::gibbs::{gibbs_correlators, GibbsState};

/// Gibbs averages `Ω(·)` of the replica monomials entering the overlap
/// identities, for one disorder sample. Replica labels follow the
/// monomial names: `q12_q23` is `Ω(q₁₂ q₂₃)` and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicaMonomials {
    pub q12: f64,
    pub q12_sq: f64,
    pub q12_q23: f64,
    pub q12_q34: f64,
    pub q12_cube: f64,
    pub q12_q23_sq: f64,
    pub q12_q34_sq: f64,
    pub q12_fourth: f64,
    pub q12_sq_q23_sq: f64,
    pub q12_sq_q34_sq: f64,
}

impl ReplicaMonomials {
    /// `q₁₂² − 4 q₁₂q₂₃ + 3 q₁₂q₃₄`.
    pub fn quadratic_combination(&self) -> f64 {
        self.q12_sq - 4.0 * self.q12_q23 + 3.0 * self.q12_q34
    }

    /// `q₁₂³ − 4 q₁₂q₂₃² + 3 q₁₂q₃₄²`.
    pub fn cubic_combination(&self) -> f64 {
        self.q12_cube - 4.0 * self.q12_q23_sq + 3.0 * self.q12_q34_sq
    }

    /// `q₁₂⁴ − 4 q₁₂²q₂₃² + 3 q₁₂²q₃₄²`.
    pub fn quartic_combination(&self) -> f64 {
        self.q12_fourth - 4.0 * self.q12_sq_q23_sq + 3.0 * self.q12_sq_q34_sq
    }
}

/// Replica-factorized monomials: each replica contributes one correlator
/// of the sites it carries, and all site indices are summed independently.
/// The quartic sums cost `O(n⁴)` on top of the `O(n 2^n)` enumeration.
pub fn replica_monomials(state: &GibbsState) -> ReplicaMonomials {
    let n = state.n();
    let nf = n as f64;
    let one: Vec<f64> = (0..n).map(|i| state.correlator_mask(1 << i)).collect();
    // every ordered pair (i, j), including i = j, as (mask, ω(σ_i σ_j))
    let pairs: Vec<(usize, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (1usize << i) ^ (1usize << j)))
        .map(|m| (m, state.correlator_mask(m)))
        .collect();

    let q12 = one.iter().map(|m| m * m).sum::<f64>() / nf;
    let mut q12_sq = 0.0;
    let mut q12_q23 = 0.0;
    for (idx, &(_, w)) in pairs.iter().enumerate() {
        let (i, j) = (idx / n, idx % n);
        q12_sq += w * w;
        q12_q23 += one[i] * w * one[j];
    }
    q12_sq /= nf * nf;
    q12_q23 /= nf * nf;

    let mut q12_cube = 0.0;
    let mut q12_q23_sq = 0.0;
    for (i, &mi) in one.iter().enumerate() {
        for &(mask, w) in &pairs {
            let c = state.correlator_mask((1 << i) ^ mask);
            q12_cube += c * c;
            q12_q23_sq += mi * c * w;
        }
    }
    q12_cube /= nf.powi(3);
    q12_q23_sq /= nf.powi(3);

    let mut q12_fourth = 0.0;
    let mut q12_sq_q23_sq = 0.0;
    for &(a, wa) in &pairs {
        for &(b, wb) in &pairs {
            let c = state.correlator_mask(a ^ b);
            q12_fourth += c * c;
            q12_sq_q23_sq += wa * c * wb;
        }
    }
    q12_fourth /= nf.powi(4);
    q12_sq_q23_sq /= nf.powi(4);

    ReplicaMonomials {
        q12,
        q12_sq,
        q12_q23,
        q12_q34: q12 * q12,
        q12_cube,
        q12_q23_sq,
        q12_q34_sq: q12 * q12_sq,
        q12_fourth,
        q12_sq_q23_sq,
        q12_sq_q34_sq: q12_sq * q12_sq,
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Quenched averages `⟨·⟩ = E Ω(·)` of the overlap and the identity
/// polynomials.
///
/// Standard errors come from the delete-one jackknife over disorder
/// samples; for plain averages this equals the sample standard deviation
/// over `√n_samples`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapMoments {
    pub n: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// `⟨q₁₂⟩`.
    pub q1: Estimate,
    /// `⟨q₁₂²⟩`.
    pub q2: Estimate,
    /// `⟨cubic⟩ − ⟨q₁₂⟩⟨quadratic⟩`, momentum conservation.
    pub p1: Estimate,
    /// `⟨quartic⟩ − ⟨q₁₂⟩⟨cubic⟩`, energy conservation.
    pub p2: Estimate,
    /// `⟨quartic⟩ − ⟨q₁₂⟩²⟨quadratic⟩`, the two combined.
    pub p3: Estimate,
    /// `⟨quartic⟩`, the zero-field gauge relation.
    pub p4: Estimate,
    /// Potential `½(⟨q₁₂²⟩ − ⟨q₁₂⟩²)`.
    pub v_n: Estimate,
}

#[derive(Clone, Copy, Default)]
struct Means {
    q1: f64,
    q2: f64,
    quadratic: f64,
    cubic: f64,
    quartic: f64,
}

impl Means {
    fn of(m: &ReplicaMonomials) -> Self {
        Means {
            q1: m.q12,
            q2: m.q12_sq,
            quadratic: m.quadratic_combination(),
            cubic: m.cubic_combination(),
            quartic: m.quartic_combination(),
        }
    }

    fn axpy(&mut self, a: f64, o: &Means) {
        self.q1 += a * o.q1;
        self.q2 += a * o.q2;
        self.quadratic += a * o.quadratic;
        self.cubic += a * o.cubic;
        self.quartic += a * o.quartic;
    }
}

type Estimator = fn(&Means) -> f64;

const ESTIMATORS: [Estimator; 7] = [
    |m| m.q1,
    |m| m.q2,
    |m| m.cubic - m.q1 * m.quadratic,
    |m| m.quartic - m.q1 * m.cubic,
    |m| m.quartic - m.q1 * m.q1 * m.quadratic,
    |m| m.quartic,
    |m| 0.5 * (m.q2 - m.q1 * m.q1),
];

fn jackknife(samples: &[Means]) -> [Estimate; 7] {
    let k = samples.len() as f64;
    let mut total = Means::default();
    // fixed summation order keeps results bit-identical across runs
    samples.iter().for_each(|s| total.axpy(1.0, s));
    let mut full = total;
    full.axpy(1.0 / k - 1.0, &total);
    let mut sums = [0.0; 7];
    let mut squares = [0.0; 7];
    for s in samples {
        let mut loo = total;
        loo.axpy(-1.0, s);
        let mut scaled = Means::default();
        scaled.axpy(1.0 / (k - 1.0), &loo);
        for (e, f) in ESTIMATORS.iter().enumerate() {
            let v = f(&scaled);
            sums[e] += v;
            squares[e] += v * v;
        }
    }
    std::array::from_fn(|e| {
        let mean = sums[e] / k;
        let var = (squares[e] / k - mean * mean).max(0.0);
        Estimate {
            value: ESTIMATORS[e](&full),
            std_error: ((k - 1.0) * var).sqrt(),
        }
    })
}

/// Per-sample monomials for samples `0..n_samples` of `seed`, in sample
/// order. Samples are processed in parallel.
pub fn sample_monomials(params: SkParams, n: usize, n_samples: usize, seed: u64) -> Result<Vec<ReplicaMonomials>> {
    (0..n_samples as u64)
        .into_par_iter()
        .map(|index| {
            let sample = DisorderSample::draw(n, seed, index)?;
            Ok(replica_monomials(&gibbs_correlators(&sample, params)?))
        })
        .collect()
}

/// Quenched overlap moments and identity polynomials over `n_samples`
/// disorder realizations.
pub fn quenched_overlap_moments(params: SkParams, n: usize, n_samples: usize, seed: u64) -> Result<OverlapMoments> {
    if n_samples < 2 {
        return Err(Error::invalid("n_samples", format!("need at least 2, got {n_samples}")));
    }
    let per_sample = sample_monomials(params, n, n_samples, seed)?;
    let means: Vec<Means> = per_sample.iter().map(Means::of).collect();
    let [q1, q2, p1, p2, p3, p4, v_n] = jackknife(&means);
    Ok(OverlapMoments {
        n,
        n_samples,
        seed,
        q1,
        q2,
        p1,
        p2,
        p3,
        p4,
        v_n,
    })
}

/// The conservation-law polynomials and the potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub n: usize,
    pub n_samples: usize,
    pub p1: Estimate,
    pub p2: Estimate,
    pub p3: Estimate,
    /// Only expected to vanish at zero field.
    pub p4: Estimate,
    pub v_n: Estimate,
}

pub fn sk_identity_residuals(params: SkParams, n: usize, n_samples: usize, seed: u64) -> Result<IdentityResiduals> {
    let m = quenched_overlap_moments(params, n, n_samples, seed)?;
    Ok(IdentityResiduals {
        n,
        n_samples,
        p1: m.p1,
        p2: m.p2,
        p3: m.p3,
        p4: m.p4,
        v_n: m.v_n,
    })
}
