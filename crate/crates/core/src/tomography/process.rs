use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::linalg::{c, eigvalsh, hermiticity_defect, max_eigenvalue, min_eigenvalue, CMat};

/// Default tolerance for the Hermiticity, positivity and completeness checks.
pub const CHI_TOL: f64 = 1e-9;

/// Process fidelity of the best classical measure-and-prepare map.
pub const PROCESS_CLASSICAL_THRESHOLD: f64 = 0.5;

/// Process matrix reconstructed from the converter experiment, rows and
/// columns ordered (𝟙, σx, σy, σz). Entries are rounded to three decimals.
pub const EXPERIMENT_CHI: [[(f64, f64); 4]; 4] = [
    [(0.578, 0.0), (0.011, -0.021), (0.006, -0.027), (0.069, -0.065)],
    [(0.011, 0.021), (0.165, 0.0), (0.001, -0.105), (0.002, -0.015)],
    [(0.006, 0.027), (0.001, 0.105), (0.136, 0.0), (-0.010, 0.006)],
    [(0.069, 0.065), (0.002, 0.015), (-0.010, -0.006), (0.026, 0.0)],
];

/// {𝟙, σx, σy, σz}.
pub fn pauli_basis() -> [CMat; 4] {
    let m = |a: [(f64, f64); 4]| CMat::from_row_slice(2, 2, &a.map(|(re, im)| c(re, im)));
    [
        m([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
        m([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
        m([(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)]),
        m([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)]),
    ]
}

/// Qubit channel ε(ρ) = Σ_nm χ_nm A_n ρ A_m† in the Pauli basis A.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessMatrix {
    chi: CMat,
}

impl ProcessMatrix {
    pub fn new(chi: CMat) -> Result<Self> {
        Self::with_tolerance(chi, CHI_TOL)
    }

    /// Accepts χ whose invariants hold to `tol`; used for rounded literature values.
    pub fn with_tolerance(chi: CMat, tol: f64) -> Result<Self> {
        if chi.shape() != (4, 4) {
            return Err(Error::DimensionMismatch { expected: 4, found: chi.nrows() });
        }
        let defect = hermiticity_defect(&chi);
        if defect > tol {
            return Err(Error::InvalidState(format!("χ not Hermitian (defect {defect:e})")));
        }
        let chi = crate::fock::linalg::hermitian_part(&chi);
        let min = min_eigenvalue(&chi);
        if min < -tol {
            return Err(Error::NegativeEigenvalue(min));
        }
        let top = max_eigenvalue(&completeness(&chi));
        if top > 1.0 + tol {
            return Err(Error::InvalidState(format!("χ increases trace (completeness eigenvalue {top})")));
        }
        Ok(Self { chi })
    }

    pub fn identity() -> Self {
        let mut chi = CMat::zeros(4, 4);
        chi[(0, 0)] = c(1.0, 0.0);
        Self { chi }
    }

    pub fn depolarizing() -> Self {
        Self { chi: CMat::identity(4, 4).scale(0.25) }
    }

    pub fn experiment() -> Self {
        let chi = CMat::from_fn(4, 4, |i, j| c(EXPERIMENT_CHI[i][j].0, EXPERIMENT_CHI[i][j].1));
        Self::with_tolerance(chi, 1e-4).expect("rounded experimental χ is valid to 1e-4")
    }

    pub fn chi(&self) -> &CMat {
        &self.chi
    }

    /// Σ χ_nm A_m† A_n; equals 𝟙 for trace-preserving maps.
    pub fn completeness(&self) -> CMat {
        completeness(&self.chi)
    }

    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        if rho.shape() != (2, 2) {
            return Err(Error::DimensionMismatch { expected: 2, found: rho.nrows() });
        }
        let a = pauli_basis();
        let mut out = CMat::zeros(2, 2);
        for n in 0..4 {
            for m in 0..4 {
                if self.chi[(n, m)] != c(0.0, 0.0) {
                    out += (&a[n] * rho * a[m].adjoint()) * self.chi[(n, m)];
                }
            }
        }
        Ok(out)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.chi)
    }
}

fn completeness(chi: &CMat) -> CMat {
    let a = pauli_basis();
    let mut out = CMat::zeros(2, 2);
    for n in 0..4 {
        for m in 0..4 {
            out += (a[m].adjoint() * &a[n]) * chi[(n, m)];
        }
    }
    out
}

pub fn apply_process(chi: &ProcessMatrix, rho: &CMat) -> Result<CMat> {
    chi.apply(rho)
}

/// Overlap with the identity process, χ₀₀ (the 𝟙 ⊗ 𝟙 element).
pub fn process_fidelity(chi: &ProcessMatrix) -> f64 {
    chi.chi[(0, 0)].re
}

/// Mean of ⟨ψ|ε(ψ)|ψ⟩ over pure inputs, without renormalizing ε(ψ):
/// χ₀₀ + (χ_xx + χ_yy + χ_zz)/3.
pub fn average_pure_state_fidelity(chi: &ProcessMatrix) -> f64 {
    let d = |k: usize| chi.chi[(k, k)].re;
    d(0) + (d(1) + d(2) + d(3)) / 3.0
}

/// Average fidelity of a trace-preserving qubit channel with process fidelity f.
pub fn average_fidelity_from_process(f: f64) -> f64 {
    (2.0 * f + 1.0) / 3.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ChiRepr {
    /// Row-major 4×4 entries as [re, im].
    chi: Vec<Vec<[f64; 2]>>,
}

impl Serialize for ProcessMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let chi = (0..4).map(|i| (0..4).map(|j| [self.chi[(i, j)].re, self.chi[(i, j)].im]).collect()).collect();
        ChiRepr { chi }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProcessMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ChiRepr::deserialize(d)?;
        if r.chi.len() != 4 || r.chi.iter().any(|row| row.len() != 4) {
            return Err(serde::de::Error::custom("χ must be 4×4"));
        }
        let m = CMat::from_fn(4, 4, |i, j| c(r.chi[i][j][0], r.chi[i][j][1]));
        ProcessMatrix::with_tolerance(m, 1e-4).map_err(serde::de::Error::custom)
    }
}
