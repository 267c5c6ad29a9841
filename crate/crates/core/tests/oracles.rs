//! Library results against independent brute-force computations.

use meanfield::cw_exact::exact_fields;
use meanfield::hj_limit::{lax_action, viscous_action, viscous_velocity};
use meanfield::numerics::quadrature::integrate_adaptive;
use meanfield::sk_finite::{gibbs_correlators, DisorderSample};
use meanfield::sk_rs::{gaussian_expectation, rs_action, solve_qbar, GaussianKind, SkParams};
use meanfield::{PlanePoint, Side};

fn pt(x: f64, t: f64) -> PlanePoint {
    PlanePoint::new(x, t).unwrap()
}

/// Sum over all `2^N` spin configurations, no binomial grouping.
fn cw_brute_force(x: f64, t: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let energies: Vec<(f64, f64)> = (0..1u32 << n)
        .map(|c| {
            let m = (nf - 2.0 * c.count_ones() as f64) / nf;
            (nf * (0.5 * t * m * m + x * m), m)
        })
        .collect();
    let top = energies.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = energies.iter().map(|e| (e.0 - top).exp()).sum();
    let mean_m: f64 = energies.iter().map(|e| (e.0 - top).exp() * e.1).sum::<f64>() / z;
    (-(top + z.ln()) / nf, -mean_m)
}

#[test]
fn exact_fields_match_configuration_enumeration() {
    for n in [1, 2, 5, 12] {
        for (x, t) in [(0.0, 0.0), (0.3, 0.5), (-0.7, 1.5), (1.2, 3.0)] {
            let f = exact_fields(pt(x, t), n, 4).unwrap();
            let (phi, u) = cw_brute_force(x, t, n);
            assert!((f.phi - phi).abs() < 1e-13, "n={n} ({x},{t})");
            assert!((f.u - u).abs() < 1e-13, "n={n} ({x},{t})");
        }
    }
}

#[test]
fn cole_hopf_matches_exact_sum_off_grid() {
    for n in [3, 17, 64, 333] {
        for (x, t) in [(-0.4, 0.1), (0.05, 1.1), (0.9, 2.7), (-2.0, 4.0)] {
            let p = pt(x, t);
            let f = exact_fields(p, n, 4).unwrap();
            let phi = viscous_action(p, n).unwrap();
            assert!((phi - f.phi).abs() <= 1e-8 * f.phi.abs(), "n={n} ({x},{t})");
            assert!((viscous_velocity(p, n).unwrap() - f.u).abs() <= 1e-8);
        }
    }
}

/// Minimizing the Hopf-Lax objective on a fine grid recovers the action.
#[test]
fn lax_action_matches_grid_minimization() {
    for (x, t) in [(0.3, 0.5), (-0.8, 1.7), (0.1, 3.0), (0.0, 0.9)] {
        let objective = |y: f64| (x - y).powi(2) / (2.0 * t) - std::f64::consts::LN_2 - y.cosh().ln();
        let grid_min = (0..=400_000)
            .map(|i| -10.0 + 20.0 * i as f64 / 400_000.0)
            .map(objective)
            .fold(f64::INFINITY, f64::min);
        let s = lax_action(pt(x, t), Some(Side::Plus)).unwrap();
        assert!(s.phi <= grid_min + 1e-14);
        assert!(grid_min - s.phi < 1e-8, "({x},{t}): {} vs {grid_min}", s.phi);
    }
}

#[test]
fn gaussian_expectations_match_adaptive_quadrature() {
    let density = |g: f64| (-0.5 * g * g).exp() / (2.0 * std::f64::consts::PI).sqrt();
    for kind in [GaussianKind::LogCosh, GaussianKind::TanhSq, GaussianKind::SechSq, GaussianKind::Sech4] {
        for (bh, v) in [(0.0, 0.3), (0.4, 1.0), (-1.0, 4.0), (0.2, 12.0)] {
            let f = |g: f64| {
                let z: f64 = bh + g * f64::sqrt(v);
                let value = match kind {
                    GaussianKind::LogCosh => z.abs() + (-2.0 * z.abs()).exp().ln_1p() - std::f64::consts::LN_2,
                    GaussianKind::TanhSq => z.tanh().powi(2),
                    GaussianKind::SechSq => 1.0 / z.cosh().powi(2),
                    GaussianKind::Sech4 => 1.0 / z.cosh().powi(4),
                };
                value * density(g)
            };
            let oracle = integrate_adaptive(f, &[-40.0, -bh / v.sqrt(), 40.0], 1e-15, 1e-13).unwrap();
            let lib = gaussian_expectation(kind, bh, v).unwrap();
            assert!((lib - oracle.value).abs() < 1e-13, "{kind:?} bh={bh} v={v}: {lib} vs {}", oracle.value);
        }
    }
}

#[test]
fn rs_overlap_is_a_fixed_point() {
    for (x, t, bh) in [(0.0, 0.5, 0.0), (0.0, 2.0, 0.0), (0.3, 1.2, 0.4), (1.0, 4.0, -0.2)] {
        let p = SkParams::new(x, t, bh).unwrap();
        let q = solve_qbar(p).unwrap();
        let image = gaussian_expectation(GaussianKind::TanhSq, bh, x + t * q).unwrap();
        assert!((q - image).abs() < 1e-11, "({x},{t},{bh})");
        let s = rs_action(p).unwrap();
        assert_eq!(s.q_bar, q);
        assert_eq!(s.u, -q);
    }
}

#[test]
fn gibbs_correlators_match_direct_averages() {
    let n = 7;
    let params = SkParams::new(0.5, 1.4, -0.3).unwrap();
    let s = DisorderSample::draw(n, 42, 3).unwrap();
    let state = gibbs_correlators(&s, params).unwrap();
    let spin = |c: usize, i: usize| if c >> i & 1 == 0 { 1.0 } else { -1.0 };
    let log_w: Vec<f64> = (0..1usize << n)
        .map(|c| {
            let mut e = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    e += (params.t() / n as f64).sqrt() * s.coupling(i, j) * spin(c, i) * spin(c, j);
                }
                e += (params.x().sqrt() * s.site_fields[i] + params.beta_h()) * spin(c, i);
            }
            e
        })
        .collect();
    let z: f64 = log_w.iter().map(|e| e.exp()).sum();
    for sites in [&[0usize][..], &[2, 5], &[1, 3, 6], &[0, 1, 2, 3], &[4, 4], &[]] {
        let direct: f64 = log_w
            .iter()
            .enumerate()
            .map(|(c, e)| e.exp() * sites.iter().map(|&i| spin(c, i)).product::<f64>())
            .sum::<f64>()
            / z;
        assert!((state.correlator(sites).unwrap() - direct).abs() < 1e-13, "{sites:?}");
    }
}
