//! Fidelity metrics and classical thresholds.

mod bound;
mod fidelity;

pub use bound::{
    bound_strategy, bound_strategy_names, classical_bound_mixed, dual_rail_bound, radial_prior, radial_prior_names,
    BoundSpec, BoundStrategy, Bures, PointPrior, PovmScan, Projective, RadialPrior, PURE_STATE_BOUND,
};
pub use fidelity::{conversion_fidelity, fidelity_range_scan, FidelityReport, MixtureStds};
