//! Finite-size Sherrington-Kirkpatrick samples, solved exactly.
//!
//! Each disorder sample is enumerated over all `2^n` configurations
//! (`n <= 14`), which gives every Gibbs correlator at once. Overlap
//! monomials over several replicas factorize into products of
//! single-replica correlators, so quenched averages of the conservation-law
//! polynomials need no replica enumeration.

mod disorder;
mod gibbs;
mod moments;

pub use disorder::{DisorderSample, MAX_SITES};
pub use gibbs::{gibbs_correlators, GibbsState};
pub use moments::{
    quenched_overlap_moments, replica_monomials, sample_monomials, sk_identity_residuals, Estimate,
    IdentityResiduals, OverlapMoments, ReplicaMonomials,
};
