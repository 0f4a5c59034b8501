use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::linalg::{c, CMat, CVec};
use crate::fock::DensityMatrix;
use crate::sources::{cat_ket, CvBasis, Parity};

/// Below this weight the logical projection is considered meaningless.
pub const MIN_SUBSPACE_WEIGHT: f64 = 1e-6;

/// Two-dimensional logical subspace of a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LogicalBasis {
    /// {|0⟩, |1⟩}
    Fock,
    /// {|cat+⟩, |cat−⟩} of real amplitude α.
    Cat { alpha: f64 },
    /// {S|0⟩, a S|0⟩} with squeezing parameter r.
    Experimental { r: f64 },
}

impl LogicalBasis {
    /// Basis vectors (logical 0, logical 1).
    pub fn vectors(&self, dim: usize) -> Result<(CVec, CVec)> {
        match *self {
            LogicalBasis::Fock => {
                if dim < 2 {
                    return Err(Error::InvalidDimension(dim));
                }
                let mut v0 = CVec::zeros(dim);
                let mut v1 = CVec::zeros(dim);
                v0[0] = c(1.0, 0.0);
                v1[1] = c(1.0, 0.0);
                Ok((v0, v1))
            }
            LogicalBasis::Cat { alpha } => Ok((cat_ket(alpha, Parity::Even, dim)?, cat_ket(alpha, Parity::Odd, dim)?)),
            LogicalBasis::Experimental { r } => {
                let b = CvBasis::new(dim, r)?;
                Ok((b.even, b.odd))
            }
        }
    }
}

/// A state restricted to a logical subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalQubit {
    /// Renormalized 2×2 density matrix.
    pub rho: CMat,
    /// Population of the subspace before renormalization.
    pub weight: f64,
}

/// Project a single-mode state onto a logical qubit basis and renormalize.
pub fn project_logical(rho: &DensityMatrix, basis: LogicalBasis) -> Result<LogicalQubit> {
    if rho.layout().len() != 1 {
        return Err(Error::InvalidState("logical projection needs a single mode".into()));
    }
    let (v0, v1) = basis.vectors(rho.dim())?;
    let b = DMatrix::from_columns(&[v0, v1]);
    let p = b.adjoint() * rho.data() * &b;
    let norm = rho.trace();
    let weight = (p[(0, 0)].re + p[(1, 1)].re) / norm;
    if weight < MIN_SUBSPACE_WEIGHT {
        return Err(Error::SubspaceWeight(weight));
    }
    let rho = crate::fock::linalg::hermitian_part(&p.unscale(weight * norm));
    Ok(LogicalQubit { rho, weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::{cat_state, db_to_r};

    #[test]
    fn fock_projection_of_qubit_mixture() {
        let mut m = CMat::zeros(4, 4);
        m[(0, 0)] = c(0.2, 0.0);
        m[(1, 1)] = c(0.3, 0.0);
        m[(0, 1)] = c(0.1, 0.05);
        m[(1, 0)] = c(0.1, -0.05);
        m[(2, 2)] = c(0.5, 0.0);
        let rho = DensityMatrix::new(crate::fock::ModeLayout::single("C", 4).unwrap(), m, true).unwrap();
        let q = project_logical(&rho, LogicalBasis::Fock).unwrap();
        assert!((q.weight - 0.5).abs() < 1e-14);
        assert!((q.rho[(0, 0)].re - 0.4).abs() < 1e-14);
        assert!((q.rho[(0, 1)] - c(0.2, 0.1)).norm() < 1e-14);
    }

    #[test]
    fn cat_states_are_logical_basis_states() {
        let basis = LogicalBasis::Cat { alpha: 0.9 };
        let even = project_logical(&cat_state(0.9, Parity::Even, 20).unwrap(), basis).unwrap();
        assert!((even.weight - 1.0).abs() < 1e-12);
        assert!((even.rho[(0, 0)].re - 1.0).abs() < 1e-12);
        let odd = project_logical(&cat_state(0.9, Parity::Odd, 20).unwrap(), basis).unwrap();
        assert!((odd.rho[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn experimental_basis_overlaps_cats() {
        let (e, o) = LogicalBasis::Experimental { r: db_to_r(4.0) }.vectors(20).unwrap();
        let (ce, co) = LogicalBasis::Cat { alpha: 0.9 }.vectors(20).unwrap();
        assert!(e.dotc(&ce).norm() > 0.97);
        assert!(o.dotc(&co).norm() > 0.96);
        assert!(e.dotc(&o).norm() < 1e-12);
    }

    #[test]
    fn empty_subspace_is_rejected() {
        let rho = DensityMatrix::fock("C", 5, 3).unwrap();
        assert!(matches!(project_logical(&rho, LogicalBasis::Fock), Err(Error::SubspaceWeight(_))));
    }
}
