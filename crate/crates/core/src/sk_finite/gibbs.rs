use crate::error::{Error, Result};
use crate::sk_rs::SkParams;

use super::disorder::DisorderSample;

/// Exact Gibbs state of one SK sample, enumerated over all `2^n` spin
/// configurations.
///
/// Configuration `c` has `σ_i = +1` when bit `i` of `c` is clear and
/// `σ_i = −1` when it is set. With that convention the correlator of a site
/// set `S` is the Walsh-Hadamard transform of the Boltzmann probabilities
/// evaluated at the bit mask of `S`, so all `2^n` correlators come from one
/// `O(n 2^n)` pass.
#[derive(Debug, Clone)]
pub struct GibbsState {
    n: usize,
    probabilities: Vec<f64>,
    correlators: Vec<f64>,
}

impl GibbsState {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Boltzmann probability of every configuration.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `ω(Π_{i∈S} σ_i)` for the site set encoded as a bit mask.
    #[inline]
    pub fn correlator_mask(&self, mask: usize) -> f64 {
        self.correlators[mask]
    }

    /// `ω(σ_{i1} ⋯ σ_{ik})` for an arbitrary multiset of sites; repeated
    /// sites cancel since `σ² = 1`.
    pub fn correlator(&self, sites: &[usize]) -> Result<f64> {
        let mut mask = 0usize;
        for &i in sites {
            if i >= self.n {
                return Err(Error::invalid("sites", format!("site {i} outside 0..{}", self.n)));
            }
            mask ^= 1 << i;
        }
        Ok(self.correlators[mask])
    }
}

/// Gibbs state with weights
/// `exp(√(t/N) Σ_{i<j} J_ij σ_i σ_j + √x Σ_i J_i σ_i + βh Σ_i σ_i)`.
pub fn gibbs_correlators(sample: &DisorderSample, params: SkParams) -> Result<GibbsState> {
    let n = sample.n;
    let pair_scale = (params.t() / n as f64).sqrt();
    let field_scale = params.x().sqrt();
    let fields: Vec<f64> = sample
        .site_fields
        .iter()
        .map(|&j| field_scale * j + params.beta_h())
        .collect();
    let size = 1usize << n;
    let mut spins = vec![0.0; n];
    let mut log_weights = Vec::with_capacity(size);
    for c in 0..size {
        for (i, s) in spins.iter_mut().enumerate() {
            *s = if c >> i & 1 == 0 { 1.0 } else { -1.0 };
        }
        let mut pair = 0.0;
        let mut k = 0;
        for i in 0..n {
            let mut row = 0.0;
            for j in i + 1..n {
                row += sample.couplings[k] * spins[j];
                k += 1;
            }
            pair += spins[i] * row;
        }
        let one_body: f64 = fields.iter().zip(&spins).map(|(h, s)| h * s).sum();
        log_weights.push(pair_scale * pair + one_body);
    }
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probabilities: Vec<f64> = log_weights.iter().map(|w| (w - max).exp()).collect();
    let z: f64 = probabilities.iter().sum();
    probabilities.iter_mut().for_each(|p| *p /= z);
    let mut correlators = probabilities.clone();
    walsh_hadamard(&mut correlators);
    correlators[0] = 1.0;
    Ok(GibbsState {
        n,
        probabilities,
        correlators,
    })
}

/// In-place unnormalized Walsh-Hadamard transform.
fn walsh_hadamard(a: &mut [f64]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*u + *v, *u - *v);
                *u = s;
                *v = d;
            }
        }
        h *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sk(x: f64, t: f64, bh: f64) -> SkParams {
        SkParams::new(x, t, bh).unwrap()
    }

    #[test]
    fn independent_spins() {
        let s = DisorderSample::draw(5, 9, 0).unwrap();
        let g = gibbs_correlators(&s, sk(0.0, 0.0, 0.4)).unwrap();
        for i in 0..5 {
            assert!((g.correlator(&[i]).unwrap() - 0.4f64.tanh()).abs() < 1e-14);
        }
        let g = gibbs_correlators(&s, sk(0.7, 0.0, 0.1)).unwrap();
        for i in 0..5 {
            let expect = (0.1 + 0.7f64.sqrt() * s.site_fields[i]).tanh();
            assert!((g.correlator(&[i]).unwrap() - expect).abs() < 1e-14);
            let pair = g.correlator(&[i, (i + 1) % 5]).unwrap();
            let other = (0.1 + 0.7f64.sqrt() * s.site_fields[(i + 1) % 5]).tanh();
            assert!((pair - expect * other).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_hand_rolled_sixteen_states() {
        let s = DisorderSample::draw(4, 2024, 5).unwrap();
        let (x, t, bh) = (0.3, 1.7, 0.25);
        let g = gibbs_correlators(&s, sk(x, t, bh)).unwrap();
        let mut z = 0.0;
        let mut acc = [0.0; 3];
        for s0 in [1.0, -1.0] {
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    for s3 in [1.0, -1.0] {
                        let sig = [s0, s1, s2, s3];
                        let mut e = 0.0;
                        for i in 0..4 {
                            for j in i + 1..4 {
                                e += (t / 4.0).sqrt() * s.coupling(i, j) * sig[i] * sig[j];
                            }
                            e += (x.sqrt() * s.site_fields[i] + bh) * sig[i];
                        }
                        let w = e.exp();
                        z += w;
                        acc[0] += w * s1;
                        acc[1] += w * s0 * s3;
                        acc[2] += w * s0 * s1 * s2 * s3;
                    }
                }
            }
        }
        assert!((g.correlator(&[1]).unwrap() - acc[0] / z).abs() < 1e-14);
        assert!((g.correlator(&[0, 3]).unwrap() - acc[1] / z).abs() < 1e-14);
        assert!((g.correlator(&[0, 1, 2, 3]).unwrap() - acc[2] / z).abs() < 1e-14);
        assert_eq!(g.correlator(&[2, 2]).unwrap(), 1.0);
        assert_eq!(g.correlator(&[0, 2, 2]).unwrap(), g.correlator(&[0]).unwrap());
        assert!(g.correlator(&[4]).is_err());
    }

    #[test]
    fn zero_field_gauge_symmetry() {
        let s = DisorderSample::draw(6, 3, 1).unwrap();
        let g = gibbs_correlators(&s, sk(0.0, 2.0, 0.0)).unwrap();
        for mask in 0..64usize {
            if mask.count_ones() % 2 == 1 {
                assert!(g.correlator_mask(mask).abs() < 1e-14);
            }
        }
    }
}
