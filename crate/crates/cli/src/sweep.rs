//! Rectangular grid sweeps. Rows are evaluated in parallel and emitted
//! t-major, then x.

use clap::ValueEnum;
use meanfield::Side;
use rayon::prelude::*;

use crate::commands::{self, Outcome};
use crate::record::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Cw,
    SkRs,
    SkFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Exact finite-N fields (needs --n).
    Exact,
    /// Lax-Oleinik limit.
    Limit,
    /// Cole-Hopf quadrature (needs --n).
    Viscous,
    /// Conservation residuals r1, r2, r3 (needs --n).
    Identities,
    /// Shock jump, one row per t.
    Shock,
    /// Critical line x_c(t), one row per t.
    CriticalLine,
    /// Replica-symmetric action.
    Rs,
    /// Caustic margin.
    Caustic,
    /// Quenched overlap moments (needs --n, --samples, --seed).
    Finite,
}

impl Quantity {
    fn model(self) -> Model {
        match self {
            Quantity::Rs | Quantity::Caustic => Model::SkRs,
            Quantity::Finite => Model::SkFinite,
            _ => Model::Cw,
        }
    }

    fn t_only(self) -> bool {
        matches!(self, Quantity::Shock | Quantity::CriticalLine)
    }

    fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default()
    }
}

/// Grid and model settings for one sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub model: Model,
    pub quantity: Quantity,
    pub x_min: f64,
    pub x_max: f64,
    pub n_x: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
    pub n: usize,
    pub beta_h: f64,
    pub branch: Side,
    pub samples: usize,
    pub seed: Option<u64>,
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.quantity.model() != self.model {
            return Err(format!(
                "quantity `{}` does not belong to model `{}`",
                self.quantity.name(),
                self.model.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default()
            ));
        }
        if self.n_x == 0 || self.n_t == 0 {
            return Err("--n-x and --n-t must be at least 1".into());
        }
        let bounds = [self.x_min, self.x_max, self.t_min, self.t_max];
        if bounds.iter().any(|v| !v.is_finite()) {
            return Err("axis ranges must be finite".into());
        }
        if self.x_max < self.x_min || self.t_max < self.t_min {
            return Err("axis ranges need min <= max".into());
        }
        if self.t_min < 0.0 {
            return Err(format!("--t-min must be >= 0, got {}", self.t_min));
        }
        if self.model == Model::SkFinite && self.seed.is_none() {
            return Err("--seed is required for sk-finite sweeps".into());
        }
        Ok(())
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let ts = axis(self.t_min, self.t_max, self.n_t);
        if self.quantity.t_only() {
            return ts.into_iter().map(|t| (f64::NAN, t)).collect();
        }
        let xs = axis(self.x_min, self.x_max, self.n_x);
        ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect()
    }

    fn evaluate(&self, x: f64, t: f64) -> Outcome {
        let seed = self.seed.unwrap_or_default();
        match self.quantity {
            Quantity::Exact => commands::cw_exact(x, t, self.n, 4),
            Quantity::Limit => commands::cw_limit(x, t, self.branch),
            Quantity::Viscous => commands::cw_viscous(x, t, self.n),
            Quantity::Identities => commands::cw_identities(x, t, self.n),
            Quantity::Shock => commands::cw_shock(t),
            Quantity::CriticalLine => commands::cw_critical_line(t),
            Quantity::Rs => commands::sk_rs(x, t, self.beta_h),
            Quantity::Caustic => commands::sk_caustic(x, t, self.beta_h),
            Quantity::Finite => commands::sk_finite(x, t, self.beta_h, self.n, self.samples, seed),
        }
    }
}

/// Evaluates every grid point. Failed rows carry `converged = false` and an
/// `error` column; the second value reports whether any row failed to
/// converge numerically.
pub fn run_sweep(spec: &SweepSpec) -> (Vec<Record>, bool) {
    let outcomes: Vec<Outcome> = spec
        .points()
        .into_par_iter()
        .map(|(x, t)| spec.evaluate(x, t))
        .collect();
    let mut any_unconverged = false;
    let rows = outcomes
        .into_iter()
        .map(|o| {
            any_unconverged |= o.failure.as_ref().is_some_and(|e| e.is_convergence_failure());
            let mut row = Record::new();
            row.set("command", "sweep")
                .set("version", meanfield::VERSION)
                .set("quantity", spec.quantity.name());
            row.absorb(o.record);
            row
        })
        .collect();
    (rows, any_unconverged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(quantity: Quantity) -> SweepSpec {
        SweepSpec {
            model: quantity.model(),
            quantity,
            x_min: 0.0,
            x_max: 1.0,
            n_x: 3,
            t_min: 0.5,
            t_max: 1.5,
            n_t: 2,
            n: 10,
            beta_h: 0.0,
            branch: Side::Plus,
            samples: 4,
            seed: Some(1),
        }
    }

    #[test]
    fn rows_are_t_major() {
        let pts = spec(Quantity::Limit).points();
        let expect = [(0.0, 0.5), (0.5, 0.5), (1.0, 0.5), (0.0, 1.5), (0.5, 1.5), (1.0, 1.5)];
        assert_eq!(pts, expect);
    }

    #[test]
    fn t_only_quantities_ignore_x() {
        assert_eq!(spec(Quantity::Shock).points().len(), 2);
    }

    #[test]
    fn mismatched_model_is_rejected() {
        let mut s = spec(Quantity::Rs);
        s.model = Model::Cw;
        assert!(s.validate().is_err());
        let mut s = spec(Quantity::Finite);
        s.seed = None;
        assert!(s.validate().is_err());
    }

    #[test]
    fn failed_rows_do_not_stop_the_sweep() {
        // Shock jumps only exist for t > 1; the t = 0.5 row fails.
        let (rows, unconverged) = run_sweep(&spec(Quantity::Shock));
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].get("converged"), Some(&false.into()));
        assert_eq!(rows[1].get("converged"), Some(&true.into()));
        assert!(!unconverged);
    }
}
