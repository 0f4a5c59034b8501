use serde::{Deserialize, Serialize};

use crate::converter::{project_logical, LogicalBasis};
use crate::error::{Error, Result};
use crate::fock::{matrix_fidelity, DensityMatrix};
use crate::sources::{build_input_mixture, MixtureSpec, QubitSpec};

/// Fidelity between the input projected on {|0⟩, |1⟩} and the output
/// projected on the target CV basis.
pub fn conversion_fidelity(rho_in: &DensityMatrix, rho_out: &DensityMatrix, target: LogicalBasis) -> Result<f64> {
    let a = project_logical(rho_in, LogicalBasis::Fock)?;
    let b = project_logical(rho_out, target)?;
    Ok(matrix_fidelity(&a.rho, &b.rho)?.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub value: f64,
    pub bound: f64,
    pub exceeds_bound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_range: Option<(f64, f64)>,
}

impl FidelityReport {
    pub fn new(value: f64, bound: f64) -> Self {
        Self { value, bound, exceeds_bound: value > bound, error_range: None }
    }

    pub fn with_range(mut self, range: (f64, f64)) -> Self {
        self.error_range = Some(range);
        self
    }
}

/// One standard deviation per mixture field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MixtureStds {
    pub c_vac: f64,
    pub c_sp: f64,
    pub c_tp: f64,
    #[serde(rename = "phase_std_rad", default)]
    pub phase_std: f64,
}

impl MixtureStds {
    pub fn scaled(&self, k: f64) -> Self {
        Self { c_vac: self.c_vac * k, c_sp: self.c_sp * k, c_tp: self.c_tp * k, phase_std: self.phase_std * k }
    }
}

fn grid(center: f64, std: f64, steps: usize) -> Vec<f64> {
    if std == 0.0 || steps < 2 {
        return vec![center];
    }
    (0..steps)
        .map(|k| center - std + 2.0 * std * k as f64 / (steps - 1) as f64)
        .collect()
}

/// Minimal and maximal conversion fidelity over all physical input mixtures
/// within ±1 std of `center`.
///
/// Vacuum and two-photon weights are gridded; the single-photon weight
/// closes the simplex and must land in its own ±1 std interval.
pub fn fidelity_range_scan(
    center: &MixtureSpec,
    stds: &MixtureStds,
    qubit: &QubitSpec,
    rho_out: &DensityMatrix,
    target: LogicalBasis,
    grid_steps: usize,
) -> Result<(f64, f64)> {
    let [vac0, sp0, tp0] = center.weights();
    // Vacuum, one and two photons span the mixture.
    let dim = 3;
    let fid = |m: &MixtureSpec| -> Result<f64> {
        conversion_fidelity(&build_input_mixture(m, qubit, dim)?, rho_out, target)
    };
    let f_center = fid(center)?;
    let (mut lo, mut hi) = (f_center, f_center);
    let mut physical = 0usize;
    let phases: Vec<f64> = grid(center.phase_std(), stds.phase_std, grid_steps)
        .into_iter()
        .filter(|p| *p >= 0.0)
        .collect();
    for &vac in &grid(vac0, stds.c_vac, grid_steps) {
        for &tp in &grid(tp0, stds.c_tp, grid_steps) {
            let sp = 1.0 - vac - tp;
            if vac < 0.0 || tp < 0.0 || sp < 0.0 || (sp - sp0).abs() > stds.c_sp + 1e-12 {
                continue;
            }
            for &phase in &phases {
                let f = fid(&MixtureSpec::new(vac, sp, tp, phase)?)?;
                lo = lo.min(f);
                hi = hi.max(f);
                physical += 1;
            }
        }
    }
    if physical == 0 {
        return Err(Error::NoPhysicalMixture);
    }
    Ok((lo, hi))
}
