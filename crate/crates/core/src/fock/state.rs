use num_complex::Complex64 as C64;

use super::layout::ModeLayout;
use super::linalg::{self, CMat, CVec};
use super::ops;
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;

/// Dense density operator over a multimode truncated Fock space.
///
/// Conditioned branches are carried unnormalized, with the trace equal to
/// the probability of the conditioning outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: ModeLayout,
    data: CMat,
    normalized: bool,
}

/// Dense operator on one or more modes, identified by their dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub dims: Vec<usize>,
    pub data: CMat,
}

impl Operator {
    pub fn new(dims: Vec<usize>, data: CMat) -> Result<Self> {
        let n: usize = dims.iter().product();
        if data.nrows() != n || data.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: data.nrows() });
        }
        Ok(Self { dims, data })
    }

    pub fn single(data: CMat) -> Self {
        Self { dims: vec![data.nrows()], data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn identity(dim: usize) -> Self {
        Self::single(CMat::identity(dim, dim))
    }
}

impl DensityMatrix {
    /// Validated constructor (Hermiticity and trace rules; see [`Self::validate`]
    /// for the spectral check).
    pub fn new(layout: ModeLayout, data: CMat, normalized: bool) -> Result<Self> {
        let n = layout.total_dim();
        if data.nrows() != n || data.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: data.nrows() });
        }
        let rho = Self { layout, data, normalized };
        rho.check_cheap()?;
        Ok(rho)
    }

    pub(crate) fn from_parts(layout: ModeLayout, data: CMat, normalized: bool) -> Self {
        debug_assert_eq!(layout.total_dim(), data.nrows());
        Self { layout, data: linalg::hermitian_part(&data), normalized }
    }

    pub fn pure(layout: ModeLayout, ket: &CVec) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = ket.unscale(norm);
        Self::new(layout, &v * v.adjoint(), true)
    }

    pub fn fock(name: &str, dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::OutOfRange { name: "photon number", value: n as f64 });
        }
        let mut ket = CVec::zeros(dim);
        ket[n] = C64::new(1.0, 0.0);
        Self::pure(ModeLayout::single(name, dim)?, &ket)
    }

    pub fn vacuum(name: &str, dim: usize) -> Result<Self> {
        Self::fock(name, dim, 0)
    }

    /// Diagonal state from photon-number probabilities.
    pub fn diagonal(name: &str, probs: &[f64]) -> Result<Self> {
        let d = CVec::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
        let total: f64 = probs.iter().sum();
        Self::new(
            ModeLayout::single(name, probs.len())?,
            CMat::from_diagonal(&d),
            (total - 1.0).abs() <= TRACE_TOL,
        )
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn data(&self) -> &CMat {
        &self.data
    }

    pub fn into_data(self) -> CMat {
        self.data
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.data).re
    }

    pub fn purity(&self) -> f64 {
        let t = self.trace();
        (&self.data * &self.data).trace().re / (t * t)
    }

    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    fn check_cheap(&self) -> Result<()> {
        let defect = linalg::hermiticity_defect(&self.data);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("non-Hermitian (defect {defect:e})")));
        }
        let tr = linalg::trace(&self.data);
        if tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("complex trace {tr}")));
        }
        if self.normalized {
            if (tr.re - 1.0).abs() > TRACE_TOL {
                return Err(Error::InvalidState(format!("trace {} != 1", tr.re)));
            }
        } else if tr.re < -TRACE_TOL || tr.re > 1.0 + TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {} outside [0, 1]", tr.re)));
        }
        Ok(())
    }

    /// Full invariant check including positivity.
    pub fn validate(&self) -> Result<()> {
        self.check_cheap()?;
        let min = linalg::min_eigenvalue(&self.data);
        if min < -PSD_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(())
    }

    pub fn normalize(&self) -> Result<Self> {
        let t = self.trace();
        if t <= 0.0 {
            return Err(Error::ZeroProbability);
        }
        Ok(Self::from_parts(self.layout.clone(), self.data.unscale(t), true))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_parts(self.layout.clone(), self.data.scale(factor), false)
    }

    pub fn mode_index(&self, name: &str) -> Result<usize> {
        self.layout.index_of(name)
    }

    /// Conjugate by a unitary acting on the named modes, in order.
    pub fn apply_unitary(&self, modes: &[&str], op: &Operator) -> Result<Self> {
        let idx = self.indices(modes, op)?;
        let data = ops::conjugate(&self.data, &self.layout, &idx, &op.data);
        Ok(Self::from_parts(self.layout.clone(), data, self.normalized))
    }

    /// `(op ⊗ 1) ρ (op ⊗ 1)†` for a non-unitary operator; result unnormalized.
    pub fn sandwich(&self, modes: &[&str], op: &Operator) -> Result<Self> {
        let idx = self.indices(modes, op)?;
        let data = ops::conjugate(&self.data, &self.layout, &idx, &op.data);
        Ok(Self::from_parts(self.layout.clone(), data, false))
    }

    pub fn apply_kraus(&self, mode: &str, kraus: &[CMat]) -> Result<Self> {
        let i = self.layout.index_of(mode)?;
        let d = self.layout.modes()[i].dim;
        if let Some(k) = kraus.iter().find(|k| k.nrows() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: k.nrows() });
        }
        let data = ops::kraus(&self.data, &self.layout, i, kraus);
        Ok(Self::from_parts(self.layout.clone(), data, self.normalized))
    }

    /// Tr_mode[(effect ⊗ 1) ρ]; the outcome probability is the trace of the result.
    pub fn measure(&self, mode: &str, effect: &Operator) -> Result<Self> {
        let i = self.layout.index_of(mode)?;
        let d = self.layout.modes()[i].dim;
        if effect.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: effect.dim() });
        }
        let data = ops::measure_and_trace(&self.data, &self.layout, i, &effect.data);
        Ok(Self::from_parts(self.layout.without(i), data, false))
    }

    fn indices(&self, modes: &[&str], op: &Operator) -> Result<Vec<usize>> {
        let idx = modes
            .iter()
            .map(|m| self.layout.index_of(m))
            .collect::<Result<Vec<_>>>()?;
        let dims: Vec<usize> = idx.iter().map(|&i| self.layout.modes()[i].dim).collect();
        let need: usize = dims.iter().product();
        if need != op.dim() {
            return Err(Error::DimensionMismatch { expected: need, found: op.dim() });
        }
        Ok(idx)
    }

    /// Mean photon number of a mode.
    pub fn mean_photon_number(&self, mode: &str) -> Result<f64> {
        let i = self.layout.index_of(mode)?;
        let mut acc = 0.0;
        for k in 0..self.dim() {
            let n = self.layout.unflatten(k)[i];
            acc += n as f64 * self.data[(k, k)].re;
        }
        Ok(acc / self.trace())
    }

    /// Photon-number distribution of a single-mode state (trace-normalized).
    pub fn photon_distribution(&self) -> Vec<f64> {
        let t = self.trace();
        self.data.diagonal().iter().map(|z| z.re / t).collect()
    }
}

/// Kronecker product in the given order.
pub fn tensor(states: &[&DensityMatrix]) -> Result<DensityMatrix> {
    let (first, rest) = states
        .split_first()
        .ok_or_else(|| Error::InvalidState("empty tensor product".into()))?;
    let mut layout = first.layout.clone();
    let mut data = first.data.clone();
    let mut normalized = first.normalized;
    for s in rest {
        layout = layout.concat(&s.layout)?;
        data = linalg::kron(&data, &s.data);
        normalized &= s.normalized;
    }
    Ok(DensityMatrix::from_parts(layout, data, normalized))
}

pub fn partial_trace(rho: &DensityMatrix, mode: &str) -> Result<DensityMatrix> {
    let i = rho.layout.index_of(mode)?;
    let data = ops::partial_trace(&rho.data, &rho.layout, i);
    Ok(DensityMatrix::from_parts(rho.layout.without(i), data, rho.normalized))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::linalg::{c, max_abs};

    fn bell() -> DensityMatrix {
        let layout = ModeLayout::new([("a", 2), ("b", 2)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ket = CVec::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        DensityMatrix::pure(layout, &ket).unwrap()
    }

    #[test]
    fn tensor_of_vacua() {
        let a = DensityMatrix::vacuum("a", 3).unwrap();
        let b = DensityMatrix::vacuum("b", 2).unwrap();
        let ab = tensor(&[&a, &b]).unwrap();
        assert_eq!(ab.dim(), 6);
        assert!((ab.trace() - 1.0).abs() < 1e-15);
        assert_eq!(ab.element(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn tensor_trace_is_multiplicative() {
        let a = DensityMatrix::diagonal("a", &[0.3, 0.7]).unwrap();
        let b = DensityMatrix::diagonal("b", &[0.25, 0.25]).unwrap();
        let ab = tensor(&[&a, &b]).unwrap();
        assert!((ab.trace() - 0.5).abs() < 1e-15);
        assert!(!ab.is_normalized());
    }

    #[test]
    fn tensor_of_three_maximally_mixed_qubits() {
        let half = [0.5, 0.5];
        let s: Vec<_> = ["a", "b", "c"].iter().map(|n| DensityMatrix::diagonal(n, &half).unwrap()).collect();
        let t = tensor(&[&s[0], &s[1], &s[2]]).unwrap();
        let oracle = CMat::identity(8, 8).scale(0.125);
        assert!(max_abs(&(t.data() - oracle)) < 1e-15);
    }

    #[test]
    fn tensor_rejects_duplicate_names() {
        let a = DensityMatrix::vacuum("a", 2).unwrap();
        assert!(matches!(tensor(&[&a, &a]), Err(Error::DuplicateMode(_))));
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let a = DensityMatrix::vacuum("a", 2).unwrap();
        let b = DensityMatrix::vacuum("b", 2).unwrap();
        let ab = tensor(&[&a, &b]).unwrap();
        assert_eq!(partial_trace(&ab, "b").unwrap().data(), a.data());

        let reduced = partial_trace(&bell(), "b").unwrap();
        assert!(max_abs(&(reduced.data() - CMat::identity(2, 2).scale(0.5))) < 1e-15);
        assert!(matches!(partial_trace(&bell(), "z"), Err(Error::UnknownMode(_))));
    }

    #[test]
    fn partial_trace_of_two_mode_squeezed_vacuum() {
        let lambda: f64 = 0.3;
        let dim = 6;
        let layout = ModeLayout::new([("a", dim), ("b", dim)]).unwrap();
        let mut ket = CVec::zeros(dim * dim);
        for n in 0..dim {
            ket[n * dim + n] = c(lambda.powi(n as i32), 0.0);
        }
        let rho = DensityMatrix::pure(layout, &ket).unwrap();
        let red = partial_trace(&rho, "b").unwrap();
        // direct summation over the Fock basis
        let z: f64 = (0..dim).map(|n| lambda.powi(2 * n as i32)).sum();
        for m in 0..dim {
            for n in 0..dim {
                let expected = if m == n { lambda.powi(2 * n as i32) / z } else { 0.0 };
                assert!((red.element(m, n).re - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_invalid_matrices() {
        let l = ModeLayout::single("a", 2).unwrap();
        let non_herm = CMat::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(l.clone(), non_herm, true).is_err());
        let bad_trace = CMat::identity(2, 2);
        assert!(DensityMatrix::new(l.clone(), bad_trace, true).is_err());
        let neg = CMat::from_row_slice(2, 2, &[c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.2, 0.0)]);
        let rho = DensityMatrix::new(l, neg, true).unwrap();
        assert!(rho.validate().is_err());
    }
}
