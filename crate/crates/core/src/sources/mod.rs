//! Resource states: DV input qubits, cat states, the hybrid entangled
//! resource, and phase noise.

mod cv;
mod noise;
mod qubit;

pub use cv::{
    cat_ket, cat_state, db_to_r, hybrid_entangled, r_to_db, CvBasis, HybridSpec, Parity, CV_MODE, CV_TAIL_LIMIT, DV_MODE,
};
pub use noise::{build_input_mixture, dephase, estimate_phase_std, MixtureSpec, PhaseNoise};
pub use qubit::{
    canonical_qubits, embed_logical, prepare_dv_qubit_heralded, prepare_dv_qubit_ideal, qubit_from_counts, wrap_angle,
    QubitSpec, ThetaConvention, HERALD_TAIL_LIMIT, INPUT_MODE,
};
