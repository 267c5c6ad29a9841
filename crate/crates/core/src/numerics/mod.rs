//! Numerical building blocks shared by the model modules.

pub mod quadrature;
pub mod roots;
pub mod special;

pub use quadrature::{integrate_adaptive, normal_expectation, Quadrature};
pub use roots::{bisect, golden_section_min, safeguarded_newton};
pub use special::{log_cosh, log_sum_exp, sech};
