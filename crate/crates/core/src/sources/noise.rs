use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::qubit::{QubitSpec, INPUT_MODE};
use crate::error::{Error, Result};
use crate::fock::linalg::{c, CMat};
use crate::fock::{DensityMatrix, ModeLayout};

/// Gaussian phase averaging: ρ_mn → ρ_mn exp(−(m−n)² Δφ²/2).
pub fn dephase(rho: &DensityMatrix, phase_std: f64) -> Result<DensityMatrix> {
    if !(phase_std >= 0.0) {
        return Err(Error::OutOfRange { name: "phase_std", value: phase_std });
    }
    if rho.layout().len() != 1 {
        return Err(Error::InvalidState("dephasing acts on a single mode".into()));
    }
    let s2 = phase_std * phase_std;
    let data = CMat::from_fn(rho.dim(), rho.dim(), |m, n| {
        let d = m as f64 - n as f64;
        rho.element(m, n) * (-d * d * s2 / 2.0).exp()
    });
    DensityMatrix::new(rho.layout().clone(), data, rho.is_normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseNoise {
    pub phase_std_rad: f64,
    /// Δφ / 2π, in percent.
    pub percent_of_turn: f64,
}

/// Invert the coherence suppression: Δφ = √(−2 ln(measured/ideal)).
pub fn estimate_phase_std(ideal: f64, measured: f64) -> Result<PhaseNoise> {
    if !(ideal > 0.0) || !(measured > 0.0) {
        return Err(Error::OutOfRange { name: "coherence", value: ideal.min(measured) });
    }
    if measured > ideal {
        return Err(Error::OutOfRange { name: "measured coherence", value: measured });
    }
    let phase_std_rad = (-2.0 * (measured / ideal).ln()).sqrt();
    Ok(PhaseNoise { phase_std_rad, percent_of_turn: 100.0 * phase_std_rad / (2.0 * PI) })
}

/// Input mixture c_vac|0⟩⟨0| + c_sp·dephase(|Q⟩⟨Q|) + c_tp|2⟩⟨2|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixtureRaw", into = "MixtureRaw")]
pub struct MixtureSpec {
    c_vac: f64,
    c_sp: f64,
    c_tp: f64,
    phase_std: f64,
}

#[derive(Serialize, Deserialize)]
struct MixtureRaw {
    c_vac: f64,
    c_sp: f64,
    c_tp: f64,
    #[serde(default)]
    phase_std_rad: f64,
    /// Rescale the weights to unit sum instead of rejecting them.
    #[serde(default, skip_serializing)]
    renormalize: bool,
}

impl TryFrom<MixtureRaw> for MixtureSpec {
    type Error = Error;
    fn try_from(r: MixtureRaw) -> Result<Self> {
        if r.renormalize {
            MixtureSpec::renormalized(r.c_vac, r.c_sp, r.c_tp, r.phase_std_rad)
        } else {
            MixtureSpec::new(r.c_vac, r.c_sp, r.c_tp, r.phase_std_rad)
        }
    }
}

impl From<MixtureSpec> for MixtureRaw {
    fn from(m: MixtureSpec) -> Self {
        Self { c_vac: m.c_vac, c_sp: m.c_sp, c_tp: m.c_tp, phase_std_rad: m.phase_std, renormalize: false }
    }
}

pub const MIXTURE_SUM_TOL: f64 = 1e-9;

impl MixtureSpec {
    pub fn new(c_vac: f64, c_sp: f64, c_tp: f64, phase_std: f64) -> Result<Self> {
        for (name, v) in [("c_vac", c_vac), ("c_sp", c_sp), ("c_tp", c_tp), ("phase_std", phase_std)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        let sum = c_vac + c_sp + c_tp;
        if (sum - 1.0).abs() > MIXTURE_SUM_TOL {
            return Err(Error::OutOfRange { name: "mixture weight sum", value: sum });
        }
        Ok(Self { c_vac, c_sp, c_tp, phase_std })
    }

    /// Measured component tables do not sum exactly to one; rescale them.
    pub fn renormalized(c_vac: f64, c_sp: f64, c_tp: f64, phase_std: f64) -> Result<Self> {
        let sum = c_vac + c_sp + c_tp;
        if !(sum > 0.0) || c_vac < 0.0 || c_sp < 0.0 || c_tp < 0.0 {
            return Err(Error::OutOfRange { name: "mixture weight", value: c_vac.min(c_sp).min(c_tp) });
        }
        Self::new(c_vac / sum, c_sp / sum, c_tp / sum, phase_std)
    }

    pub fn weights(&self) -> [f64; 3] {
        [self.c_vac, self.c_sp, self.c_tp]
    }

    pub fn phase_std(&self) -> f64 {
        self.phase_std
    }
}

pub fn build_input_mixture(spec: &MixtureSpec, qubit: &QubitSpec, dim: usize) -> Result<DensityMatrix> {
    if dim < 3 {
        return Err(Error::InvalidDimension(dim));
    }
    let [c_vac, c_sp, c_tp] = spec.weights();
    let layout = ModeLayout::single(INPUT_MODE, dim)?;
    let q = qubit.ket(dim);
    let pure = DensityMatrix::new(layout.clone(), &q * q.adjoint(), true)?;
    let noisy = dephase(&pure, spec.phase_std)?;
    let mut m = noisy.data().scale(c_sp);
    m[(0, 0)] += c(c_vac, 0.0);
    m[(2, 2)] += c(c_tp, 0.0);
    DensityMatrix::new(layout, m, true)
}
