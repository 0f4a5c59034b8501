//! Multimode truncated Fock-space states, operators and channels.

pub mod channels;
pub mod gates;
pub mod layout;
pub mod linalg;
pub mod metrics;
pub(crate) mod ops;
pub mod quadrature;
pub mod random;
pub mod state;
pub mod wigner;

pub use channels::{loss_adjoint, loss_channel, loss_kraus};
pub use gates::{annihilation, beamsplitter, beamsplitter_unitary, coherent_ket, displacement_op, squeezing_op};
pub use layout::{Mode, ModeLayout};
pub use metrics::{entropy_bits, g2_zero, matrix_fidelity, uhlmann_fidelity};
pub use quadrature::{quadrature_window_operator, QuadratureConvention, Window, SIGMA0};
pub use state::{partial_trace, tensor, DensityMatrix, Operator};
pub use wigner::wigner;
