//! Thermodynamic limit of the Curie-Weiss mechanics.
//!
//! As `N → ∞` the viscous Hamilton-Jacobi equation for the Guerra action
//! loses its `1/(2N) ∂²φ` term. The limit is the Lax-Oleinik solution
//!
//! ```text
//! φ(x,t) = min_y { (x − y)²/(2t) − ln 2 − ln cosh y },   u = (x − y*)/t
//! ```
//!
//! whose velocity jumps across `x = 0` once `t > 1`. The finite-`N`
//! solution is available here through its Cole-Hopf integral, which allows
//! measuring how quickly it approaches the limit.

mod characteristics;
mod lax;
mod viscous;

pub use characteristics::{
    characteristic, critical_line, crossing_pairs, crossing_scan, Characteristic, CrossingScan,
};
pub use lax::{
    fold_launch_point, lax_action, self_consistent_magnetization, shock_jump,
    spontaneous_magnetization, symmetry_breaking_limit, velocity_slope, Branch, LaxSolution,
    ShockJump,
};
pub use viscous::{viscous_action, viscous_velocity};

pub(crate) use characteristics::sample_line;
