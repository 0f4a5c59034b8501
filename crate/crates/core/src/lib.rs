//! Density-operator simulation of converting Fock-basis (discrete-variable)
//! optical qubits into cat-state (continuous-variable) qubits by
//! teleportation through hybrid entanglement, with the fidelity benchmarks
//! and state/process tomography used to assess it.

pub mod benchmarks;
pub mod converter;
pub mod detector;
pub mod error;
pub mod fock;
pub mod io;
pub mod sources;
pub mod tomography;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
