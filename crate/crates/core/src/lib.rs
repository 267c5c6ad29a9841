//! Mean-field spin models as one-dimensional fluids.
//!
//! The pressure of a mean-field model, viewed as a function of a cavity-field
//! strength `x` and an interaction strength `t`, solves a Hamilton-Jacobi
//! equation whose velocity field (minus the order parameter) solves a Burgers
//! equation. At finite size `N` the equations carry a `1/N` viscosity; in the
//! thermodynamic limit they become inviscid, and phase transitions show up as
//! shocks and caustics of the characteristics.
//!
//! Modules:
//!
//! * [`cw_exact`] – exact finite-`N` Curie-Weiss sums and PDE residuals.
//! * [`hj_limit`] – Cole-Hopf integrals, the Lax-Oleinik solution, the
//!   shock line and the critical line.
//! * [`sk_rs`] – replica-symmetric Sherrington-Kirkpatrick solver and its
//!   caustic.
//! * [`sk_finite`] – exact-enumeration SK samples and the overlap identities.
//! * [`study`] – convergence-rate reports built on the above.
//!
//! A narrative guide lives in the `book/` directory of the repository; its
//! code listings are compiled and run as doc-tests of this crate.

pub mod cw_exact;
mod error;
pub mod hj_limit;
pub mod numerics;
pub mod sk_finite;
pub mod sk_rs;
pub mod study;

use serde::Serialize;

pub use error::{Error, Result};

/// Version of this library, echoed by the command-line tool.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A point `(x, t)` of the half-plane `t >= 0`.
///
/// `x` is the cavity (external) field strength and `t` the interaction
/// strength; for Curie-Weiss, `t = β` and `x = βh`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanePoint {
    x: f64,
    t: f64,
}

impl PlanePoint {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        error::ensure_finite("x", x)?;
        error::ensure_non_negative("t", t)?;
        Ok(PlanePoint { x, t })
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }

    /// `true` on the Curie-Weiss shock line `x = 0, t > 1`.
    pub fn on_shock_line(&self) -> bool {
        self.x == 0.0 && self.t > 1.0
    }
}

/// Which one-sided limit to take across the shock line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Limit from `x > 0`.
    Plus,
    /// Limit from `x < 0`.
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Side::Plus),
            "minus" | "-" => Ok(Side::Minus),
            other => Err(Error::invalid("side", format!("expected plus or minus, got `{other}`"))),
        }
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/curie_weiss.md")]
    mod curie_weiss {}
    #[doc = include_str!("../../../book/src/cole_hopf.md")]
    mod cole_hopf {}
    #[doc = include_str!("../../../book/src/shocks.md")]
    mod shocks {}
    #[doc = include_str!("../../../book/src/conservation.md")]
    mod conservation {}
    #[doc = include_str!("../../../book/src/sk_replica_symmetric.md")]
    mod sk_replica_symmetric {}
    #[doc = include_str!("../../../book/src/sk_finite.md")]
    mod sk_finite {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_point_validation() {
        assert!(PlanePoint::new(0.3, 0.0).is_ok());
        assert!(PlanePoint::new(-4.0, 2.0).is_ok());
        assert!(PlanePoint::new(0.0, -1e-12).is_err());
        assert!(PlanePoint::new(f64::NAN, 1.0).is_err());
        assert!(PlanePoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn shock_line_membership() {
        assert!(PlanePoint::new(0.0, 1.5).unwrap().on_shock_line());
        assert!(!PlanePoint::new(0.0, 1.0).unwrap().on_shock_line());
        assert!(!PlanePoint::new(1e-300, 2.0).unwrap().on_shock_line());
    }

    #[test]
    fn side_parsing() {
        assert_eq!("plus".parse::<Side>().unwrap(), Side::Plus);
        assert_eq!("minus".parse::<Side>().unwrap(), Side::Minus);
        assert!("left".parse::<Side>().is_err());
    }
}
