//! Conditional DV → CV qubit conversion.

mod homodyne;
mod logical;
mod params;
mod pipeline;
mod sweep;

pub use homodyne::{homodyne_model, homodyne_model_names, HomodyneLossModel, LossChannel, TwoLevelMap};
pub use logical::{project_logical, LogicalBasis, LogicalQubit, MIN_SUBSPACE_WEIGHT};
pub use params::{effective_hd_efficiency, Dims, ProtocolParams};
pub use pipeline::{bucket_povm, convert_qubit, hybrid_resource, input_state, run_conversion, ConversionResult, RunSummary, TAP_MODE};
pub use sweep::{six_input_acceptance, sweep_window, SweepPoint};
