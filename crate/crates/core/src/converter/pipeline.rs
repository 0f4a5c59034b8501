use serde::Serialize;

use super::homodyne::homodyne_model;
use super::params::{effective_hd_efficiency, ProtocolParams};
use crate::detector::{detector, Bucket, HeraldDetector};
use crate::error::{check_unit, Error, Result};
use crate::fock::{beamsplitter, partial_trace, quadrature_window_operator, tensor, DensityMatrix, Operator};
use crate::sources::{hybrid_entangled, prepare_dv_qubit_ideal, HybridSpec, QubitSpec, CV_MODE, DV_MODE, INPUT_MODE};

pub const TAP_MODE: &str = "D";

/// Outcome of one conditional conversion run.
#[derive(Debug, Clone)]
pub struct ConversionResult {
    /// Normalized CV output (mode C).
    pub output: DensityMatrix,
    /// Unnormalized conditional output; its trace is `success_prob`.
    pub unnormalized: DensityMatrix,
    /// Joint probability of a herald click and a homodyne value in the window.
    pub success_prob: f64,
    pub click_prob: f64,
    /// Fraction of heralded events accepted by the window.
    pub window_acceptance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunSummary {
    pub success_prob: f64,
    pub click_prob: f64,
    pub window_acceptance: f64,
}

impl ConversionResult {
    pub fn summary(&self) -> RunSummary {
        RunSummary {
            success_prob: self.success_prob,
            click_prob: self.click_prob,
            window_acceptance: self.window_acceptance,
        }
    }
}

/// Bucket detector effect Σ_{n=1}^{n_max} [1 − (1 − η)^n] |n⟩⟨n|.
pub fn bucket_povm(eta: f64, n_max: usize, dim: usize) -> Result<Operator> {
    check_unit("eta_snspd", eta)?;
    Ok(Bucket { eta, n_max: Some(n_max) }.povm(dim))
}

/// Input qubit on mode A mixed with vacuum at the preparation efficiency.
pub fn input_state(qubit: &QubitSpec, params: &ProtocolParams) -> Result<DensityMatrix> {
    prepare_dv_qubit_ideal(qubit, params.eta_qubit, params.dims.a)
}

/// Lossy hybrid resource on modes B and C.
pub fn hybrid_resource(hybrid: &HybridSpec, params: &ProtocolParams) -> Result<DensityMatrix> {
    let spec = HybridSpec { squeezing_db: params.squeezing_db, ..*hybrid };
    hybrid_entangled(&spec, params.eta_dv, params.eta_cv, params.dims.b, params.dims.c)
}

fn check_modes(rho: &DensityMatrix, names: &[&str]) -> Result<()> {
    let found: Vec<&str> = rho.layout().modes().iter().map(|m| m.name.as_str()).collect();
    if found != names {
        return Err(Error::InvalidState(format!("expected modes {names:?}, found {found:?}")));
    }
    Ok(())
}

/// Teleport the DV qubit in mode A onto the CV mode C of the hybrid resource.
///
/// A and B interfere on a balanced beamsplitter; a weak tap R of B is sent
/// to the herald detector, and the remaining B is measured by homodyne
/// detection conditioned on the quadrature window.
pub fn run_conversion(rho_in: &DensityMatrix, rho_bc: &DensityMatrix, params: &ProtocolParams) -> Result<ConversionResult> {
    params.validate()?;
    check_modes(rho_in, &[INPUT_MODE])?;
    check_modes(rho_bc, &[DV_MODE, CV_MODE])?;
    let det = detector(&params.detector, params.eta_snspd)?;
    let model = homodyne_model(&params.homodyne_loss)?;

    let joint = tensor(&[rho_in, rho_bc])?;
    let mixed = beamsplitter(&joint, INPUT_MODE, DV_MODE, 0.5)?;
    let bc = partial_trace(&mixed, INPUT_MODE)?;

    let dim_d = params.dims.d;
    let with_tap = tensor(&[&bc, &DensityMatrix::vacuum(TAP_MODE, dim_d)?])?;
    let tapped = beamsplitter(&with_tap, DV_MODE, TAP_MODE, 1.0 - params.tap_r)?;
    let heralded = tapped.measure(TAP_MODE, &det.povm(dim_d))?;
    let click_prob = heralded.trace();
    if click_prob <= 0.0 {
        return Err(Error::ZeroProbability);
    }

    let dim_b = heralded.layout().dim_of(DV_MODE)?;
    let window = quadrature_window_operator(dim_b, params.window, params.lo_phase)?;
    let conditioned = model.condition(&heralded, DV_MODE, effective_hd_efficiency(params), &window)?;
    let success_prob = conditioned.trace();
    if success_prob <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    Ok(ConversionResult {
        output: conditioned.normalize()?,
        unnormalized: conditioned,
        success_prob,
        click_prob,
        window_acceptance: success_prob / click_prob,
    })
}

/// Convenience wrapper: prepare the input and the resource from specs, then convert.
pub fn convert_qubit(qubit: &QubitSpec, hybrid: &HybridSpec, params: &ProtocolParams) -> Result<ConversionResult> {
    run_conversion(&input_state(qubit, params)?, &hybrid_resource(hybrid, params)?, params)
}
