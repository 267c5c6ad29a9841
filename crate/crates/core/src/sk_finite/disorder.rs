use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest system size handled by exact enumeration.
pub const MAX_SITES: usize = 14;

/// One realization of the quenched couplings.
///
/// `couplings` holds `J_ij` for `i < j` in row-major order; `site_fields`
/// holds the cavity couplings `J_i`. Every entry is a standard normal
/// depending only on `(seed, index, entry)`, so samples can be drawn in
/// any order or in parallel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisorderSample {
    pub n: usize,
    pub seed: u64,
    pub index: u64,
    pub couplings: Vec<f64>,
    pub site_fields: Vec<f64>,
}

impl DisorderSample {
    pub fn draw(n: usize, seed: u64, index: u64) -> Result<Self> {
        if n == 0 || n > MAX_SITES {
            return Err(Error::invalid(
                "n",
                format!("exact enumeration needs 1 <= n <= {MAX_SITES}, got {n}"),
            ));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let pairs = n * (n - 1) / 2;
        let mut normal = |entry: usize| {
            // each entry owns four 32-bit words of the keystream
            rng.set_word_pos(4 * entry as u128);
            box_muller(rng.next_u64(), rng.next_u64())
        };
        let couplings = (0..pairs).map(&mut normal).collect();
        let site_fields = (pairs..pairs + n).map(&mut normal).collect();
        Ok(DisorderSample {
            n,
            seed,
            index,
            couplings,
            site_fields,
        })
    }

    /// `J_ij` for `i != j`.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(a != b && b < self.n);
        // rows 0..a hold n-1, n-2, ... entries
        self.couplings[a * (2 * self.n - a - 1) / 2 + (b - a - 1)]
    }
}

fn box_muller(a: u64, b: u64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let u1 = ((a >> 11) + 1) as f64 * SCALE;
    let u2 = (b >> 11) as f64 * SCALE;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_order_free() {
        let a = DisorderSample::draw(6, 42, 3).unwrap();
        let _ = DisorderSample::draw(6, 42, 2).unwrap();
        let b = DisorderSample::draw(6, 42, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.couplings, DisorderSample::draw(6, 42, 4).unwrap().couplings);
        assert_ne!(a.couplings, DisorderSample::draw(6, 43, 3).unwrap().couplings);
        // a prefix of entries does not depend on n
        let big = DisorderSample::draw(8, 42, 3).unwrap();
        assert_eq!(a.couplings[0], big.couplings[0]);
    }

    #[test]
    fn coupling_indexing() {
        let s = DisorderSample::draw(5, 1, 0).unwrap();
        let mut k = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                assert_eq!(s.coupling(i, j), s.couplings[k]);
                assert_eq!(s.coupling(j, i), s.couplings[k]);
                k += 1;
            }
        }
    }

    #[test]
    fn standard_normal_moments() {
        let values: Vec<f64> = (0..2000)
            .flat_map(|i| DisorderSample::draw(14, 7, i).unwrap().couplings)
            .collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let kurt = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n / (var * var);
        assert!(mean.abs() < 5.0 / n.sqrt());
        assert!((var - 1.0).abs() < 0.02);
        assert!((kurt - 3.0).abs() < 0.1);
    }

    #[test]
    fn size_guard() {
        assert!(DisorderSample::draw(0, 1, 0).is_err());
        assert!(DisorderSample::draw(15, 1, 0).is_err());
    }
}
