use super::gates::annihilation;
use super::linalg::{self, CMat};
use super::state::{DensityMatrix, TRACE_TOL};
use crate::error::{Error, Result};

/// Uhlmann fidelity (Tr√(√ρ₁ ρ₂ √ρ₁))² between normalized states.
pub fn uhlmann_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.layout().dims() != b.layout().dims() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    for s in [a, b] {
        if (s.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized("unit trace for fidelity"));
        }
    }
    matrix_fidelity(a.data(), b.data())
}

/// Uhlmann fidelity on raw unit-trace matrices.
pub fn matrix_fidelity(a: &CMat, b: &CMat) -> Result<f64> {
    let s = linalg::sqrt_psd(a)?;
    let inner = &s * b * &s;
    let t = linalg::trace_sqrt_psd(&inner)?;
    Ok((t * t).clamp(0.0, 1.0))
}

/// g²(0) = ⟨a†a†aa⟩ / ⟨a†a⟩² of a single-mode state.
pub fn g2_zero(rho: &DensityMatrix) -> Result<f64> {
    if rho.layout().len() != 1 {
        return Err(Error::InvalidState("g2 needs a single-mode state".into()));
    }
    let p = rho.photon_distribution();
    let n: f64 = p.iter().enumerate().map(|(k, w)| k as f64 * w).sum();
    if n <= 0.0 {
        return Err(Error::InvalidState("zero mean photon number".into()));
    }
    let nn: f64 = p.iter().enumerate().map(|(k, w)| (k * k.saturating_sub(1)) as f64 * w).sum();
    Ok(nn / (n * n))
}

/// Expectation of the annihilation operator of a single-mode state.
pub fn mean_amplitude(rho: &DensityMatrix) -> num_complex::Complex64 {
    let a = annihilation(rho.dim());
    (rho.data() * a).trace() / rho.trace()
}

pub fn entropy_bits(rho: &DensityMatrix) -> f64 {
    linalg::von_neumann_entropy_bits(&rho.data().unscale(rho.trace()))
}
