//! Single-point commands. Each one echoes its inputs and flattens the
//! library result into a [`Record`].

use meanfield::sk_rs::SkParams;
use meanfield::{cw_exact, hj_limit, sk_finite, sk_rs, study, Error, PlanePoint, Side};
use serde::Serialize;

use crate::record::Record;

/// A record plus how the underlying computation ended.
pub struct Outcome {
    pub record: Record,
    pub failure: Option<Error>,
}

impl Outcome {
    fn from_result<T: Serialize>(mut record: Record, result: meanfield::Result<T>) -> Self {
        match result {
            Ok(value) => {
                record.merge(&value);
                record.set("converged", true);
                Outcome {
                    record,
                    failure: None,
                }
            }
            Err(e) => {
                if let Error::NotConverged { estimate, .. } = e {
                    record.set("estimate", estimate);
                }
                record.set("converged", false);
                record.set("error", e.to_string());
                Outcome {
                    record,
                    failure: Some(e),
                }
            }
        }
    }
}

fn header(command: &str) -> Record {
    let mut r = Record::new();
    r.set("command", command).set("version", meanfield::VERSION);
    r
}

pub fn cw_exact(x: f64, t: f64, n: usize, k_max: usize) -> Outcome {
    let mut r = header("cw exact");
    r.set("x", x).set("t", t).set("n", n);
    let result = PlanePoint::new(x, t).and_then(|p| cw_exact::exact_fields(p, n, k_max));
    Outcome::from_result(r, result)
}

#[derive(Serialize)]
struct Residuals {
    hj_residual: f64,
    continuity_residual: f64,
}

pub fn cw_residuals(x: f64, t: f64, n: usize, step: f64) -> Outcome {
    let mut r = header("cw residuals");
    r.set("x", x).set("t", t).set("n", n).set("step", step);
    let result = PlanePoint::new(x, t).and_then(|p| {
        Ok(Residuals {
            hj_residual: cw_exact::hj_residual(p, n, step)?,
            continuity_residual: cw_exact::continuity_residual(p, n, step)?,
        })
    });
    Outcome::from_result(r, result)
}

pub fn cw_identities(x: f64, t: f64, n: usize) -> Outcome {
    let mut r = header("cw identities");
    r.set("x", x).set("t", t).set("n", n);
    let result = PlanePoint::new(x, t).and_then(|p| cw_exact::conservation_residuals(p, n));
    Outcome::from_result(r, result)
}

pub fn cw_limit(x: f64, t: f64, branch: Side) -> Outcome {
    let mut r = header("cw limit");
    r.set("x", x).set("t", t).set("branch_request", side_name(branch));
    let result = PlanePoint::new(x, t).and_then(|p| hj_limit::lax_action(p, Some(branch)));
    Outcome::from_result(r, result)
}

#[derive(Serialize)]
struct Viscous {
    phi: f64,
    u: f64,
}

pub fn cw_viscous(x: f64, t: f64, n: usize) -> Outcome {
    let mut r = header("cw viscous");
    r.set("x", x).set("t", t).set("n", n);
    let result = PlanePoint::new(x, t).and_then(|p| {
        Ok(Viscous {
            phi: hj_limit::viscous_action(p, n)?,
            u: hj_limit::viscous_velocity(p, n)?,
        })
    });
    Outcome::from_result(r, result)
}

pub fn cw_shock(t: f64) -> Outcome {
    let mut r = header("cw shock");
    r.set("t", t);
    Outcome::from_result(r, hj_limit::shock_jump(t))
}

#[derive(Serialize)]
struct CriticalLine {
    x_c: f64,
    fold_launch_point: f64,
}

pub fn cw_critical_line(t: f64) -> Outcome {
    let mut r = header("cw critical-line");
    r.set("t", t);
    let result = hj_limit::critical_line(t).map(|x_c| CriticalLine {
        x_c,
        fold_launch_point: hj_limit::fold_launch_point(t),
    });
    Outcome::from_result(r, result)
}

pub fn cw_crossings(t: f64, n_launch: usize) -> Outcome {
    let mut r = header("cw crossings");
    r.set("t", t).set("n_launch", n_launch);
    Outcome::from_result(r, hj_limit::crossing_scan(t, n_launch))
}

fn sk_header(command: &str, x: f64, t: f64, beta_h: f64) -> Record {
    let mut r = header(command);
    r.set("x", x).set("t", t).set("beta_h", beta_h);
    r
}

pub fn sk_rs(x: f64, t: f64, beta_h: f64) -> Outcome {
    let r = sk_header("sk rs", x, t, beta_h);
    Outcome::from_result(r, SkParams::new(x, t, beta_h).and_then(sk_rs::rs_action))
}

pub fn sk_pressure(beta: f64, h: f64) -> Outcome {
    let mut r = header("sk pressure");
    r.set("beta", beta).set("h", h);
    Outcome::from_result(r, sk_rs::rs_pressure(beta, h))
}

#[derive(Serialize)]
struct Caustic {
    q_bar: f64,
    caustic_margin: f64,
}

pub fn sk_caustic(x: f64, t: f64, beta_h: f64) -> Outcome {
    let r = sk_header("sk caustic", x, t, beta_h);
    let result = SkParams::new(x, t, beta_h).and_then(|p| {
        Ok(Caustic {
            q_bar: sk_rs::solve_qbar(p)?,
            caustic_margin: sk_rs::caustic_margin(p)?,
        })
    });
    Outcome::from_result(r, result)
}

#[derive(Serialize)]
struct RootSearch {
    found: bool,
    root: Option<sk_rs::CausticRoot>,
}

pub fn sk_caustic_root(x: f64, beta_h: f64, t_lo: f64, t_hi: f64) -> Outcome {
    let mut r = header("sk caustic-root");
    r.set("x", x).set("beta_h", beta_h).set("t_lo", t_lo).set("t_hi", t_hi);
    let result = sk_rs::caustic_root(x, beta_h, t_lo, t_hi).map(|root| RootSearch {
        found: root.is_some(),
        root,
    });
    Outcome::from_result(r, result)
}

pub fn sk_finite(x: f64, t: f64, beta_h: f64, n: usize, samples: usize, seed: u64) -> Outcome {
    let mut r = sk_header("sk finite", x, t, beta_h);
    r.set("n", n).set("samples", samples).set("seed", seed);
    let result = SkParams::new(x, t, beta_h)
        .and_then(|p| sk_finite::quenched_overlap_moments(p, n, samples, seed));
    Outcome::from_result(r, result)
}

/// One record per size, each carrying the fitted slope.
pub fn convergence_rows<T: Serialize>(model: &str, rows: &[T], slope_key: &str, slope: f64, echo: &Record) -> Vec<Record> {
    rows.iter()
        .map(|row| {
            let mut r = header("convergence");
            r.set("model", model).merge(&echo_fields(echo)).merge(row);
            r.set(slope_key, slope).set("converged", true);
            r
        })
        .collect()
}

fn echo_fields(echo: &Record) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for key in ["x", "t", "beta_h", "samples", "seed"] {
        if let Some(v) = echo.get(key) {
            map.insert(key.to_owned(), v.clone());
        }
    }
    serde_json::Value::Object(map)
}

pub enum ConvergenceModel {
    CwAction,
    CwVelocity,
    SkIdentities { beta_h: f64, samples: usize, seed: u64 },
}

/// Convergence report rows, or the failing outcome.
pub fn convergence(model: ConvergenceModel, x: f64, t: f64, ns: &[usize], side: Side) -> Result<Vec<Record>, Outcome> {
    let mut echo = Record::new();
    echo.set("x", x).set("t", t);
    let fail = |name: &str, echo: &Record, e: Error| {
        let mut r = header("convergence");
        r.set("model", name).merge(&echo_fields(echo));
        Outcome::from_result::<()>(r, Err(e))
    };
    match model {
        ConvergenceModel::CwAction | ConvergenceModel::CwVelocity => {
            let name = if matches!(model, ConvergenceModel::CwAction) {
                "cw-action"
            } else {
                "cw-velocity"
            };
            let report = PlanePoint::new(x, t).and_then(|p| match model {
                ConvergenceModel::CwAction => study::cw_action_convergence(p, ns, side),
                _ => study::cw_velocity_convergence(p, ns, side),
            });
            match report {
                Ok(rep) => Ok(convergence_rows(name, &rep.rows, "slope", rep.slope, &echo)),
                Err(e) => Err(fail(name, &echo, e)),
            }
        }
        ConvergenceModel::SkIdentities { beta_h, samples, seed } => {
            echo.set("beta_h", beta_h).set("samples", samples).set("seed", seed);
            let report = SkParams::new(x, t, beta_h)
                .and_then(|p| study::sk_identity_convergence(p, ns, samples, seed));
            match report {
                Ok(rep) => Ok(convergence_rows("sk-identities", &rep.rows, "p4_slope", rep.p4_slope, &echo)),
                Err(e) => Err(fail("sk-identities", &echo, e)),
            }
        }
    }
}

pub fn side_name(side: Side) -> &'static str {
    match side {
        Side::Plus => "plus",
        Side::Minus => "minus",
    }
}
