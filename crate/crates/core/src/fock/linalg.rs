//! Dense complex helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Eigenvalues below `-CLAMP_TOL` in a square root signal an upstream bug.
pub const CLAMP_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// max |m - m†|
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of the Hermitian part; eigenvalues ascending.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(m.nrows(), m.ncols(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    eigh(m).0
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    eigvalsh(m).first().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(m: &CMat) -> f64 {
    eigvalsh(m).last().copied().unwrap_or(0.0)
}

/// Rebuild `V f(λ) V†` from an eigendecomposition.
pub fn spectral_map(values: &[f64], vectors: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let n = vectors.nrows();
    let mut out = CMat::zeros(n, n);
    for (k, &lam) in values.iter().enumerate() {
        let w = f(lam);
        if w == 0.0 {
            continue;
        }
        let v = vectors.column(k);
        out += (v * v.adjoint()).scale(w);
    }
    out
}

fn clamp_checked(values: &[f64]) -> Result<()> {
    match values.iter().copied().find(|&v| v < -CLAMP_TOL) {
        Some(v) => Err(Error::NegativeEigenvalue(v)),
        None => Ok(()),
    }
}

/// Eigenvalues within this relative distance of zero are roundoff and
/// dropped before taking square roots.
const SQRT_NOISE_FLOOR: f64 = 1e-13;

fn floor_of(values: &[f64]) -> f64 {
    SQRT_NOISE_FLOOR * values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

/// Square root of a PSD matrix, clamping eigenvalues in [-CLAMP_TOL, 0) to zero.
pub fn sqrt_psd(m: &CMat) -> Result<CMat> {
    let (values, vectors) = eigh(m);
    clamp_checked(&values)?;
    let floor = floor_of(&values);
    Ok(spectral_map(&values, &vectors, |v| if v > floor { v.sqrt() } else { 0.0 }))
}

/// Trace of the PSD square root.
pub fn trace_sqrt_psd(m: &CMat) -> Result<f64> {
    let values = eigvalsh(m);
    clamp_checked(&values)?;
    let floor = floor_of(&values);
    Ok(values.iter().filter(|&&v| v > floor).map(|v| v.sqrt()).sum())
}

/// Frobenius projection onto the PSD cone.
pub fn project_psd(m: &CMat) -> CMat {
    let (values, vectors) = eigh(m);
    spectral_map(&values, &vectors, |v| v.max(0.0))
}

/// Frobenius projection onto { Y Hermitian : Y ⪯ bound·1 }.
pub fn project_below(m: &CMat, bound: f64) -> CMat {
    let (values, vectors) = eigh(m);
    spectral_map(&values, &vectors, |v| v.min(bound))
}

/// Matrix exponential of a square generator.
pub fn expm(m: &CMat) -> CMat {
    m.clone().exp()
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn von_neumann_entropy_bits(m: &CMat) -> f64 {
    eigvalsh(m)
        .into_iter()
        .filter(|&v| v > 1e-15)
        .map(|v| -v * v.log2())
        .sum()
}
