//! Homodyne state tomography and qubit process tomography.

mod frequencies;
mod maxlik;
mod process;
mod reconstruct;
mod sampling;

pub use frequencies::{
    pauli_effects, pipeline_frequency_table, standard_inputs, FrequencyTable, InputSet, LabeledOperator,
};
pub use maxlik::{maxlik_reconstruct, MaxLikOptions, MaxLikResult};
pub use process::{
    apply_process, average_fidelity_from_process, average_pure_state_fidelity, pauli_basis, process_fidelity,
    ProcessMatrix, CHI_TOL, EXPERIMENT_CHI, PROCESS_CLASSICAL_THRESHOLD,
};
pub use reconstruct::{process_reconstruct, ReconstructOptions};
pub use sampling::{quadrature_density, sample_quadratures, QuadratureSample};
