//! Constrained least-squares process reconstruction by ADMM consensus:
//! minimize ½‖Φx − f‖² subject to χ(x) ⪰ 0 and Σχ_nm A_m†A_n ⪯ 𝟙, with x the
//! real coordinates of χ in an orthonormal Hermitian basis.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::frequencies::FrequencyTable;
use super::process::{pauli_basis, ProcessMatrix};
use crate::error::{Error, Result};
use crate::fock::linalg::{c, max_eigenvalue, project_below, project_psd, trace, CMat};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReconstructOptions {
    pub max_iterations: usize,
    /// Bound on primal and dual residual norms at convergence.
    pub tolerance: f64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self { max_iterations: 100_000, tolerance: 1e-8 }
    }
}

/// Orthonormal (Frobenius) basis of d×d Hermitian matrices.
fn hermitian_basis(d: usize) -> Vec<CMat> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut m = CMat::zeros(d, d);
        m[(i, i)] = c(1.0, 0.0);
        out.push(m);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut re = CMat::zeros(d, d);
            re[(i, j)] = c(s, 0.0);
            re[(j, i)] = c(s, 0.0);
            out.push(re);
            let mut im = CMat::zeros(d, d);
            im[(i, j)] = c(0.0, -s);
            im[(j, i)] = c(0.0, s);
            out.push(im);
        }
    }
    out
}

fn coords(basis: &[CMat], m: &CMat) -> DVector<f64> {
    DVector::from_iterator(basis.len(), basis.iter().map(|b| trace(&(b * m)).re))
}

fn matrix(basis: &[CMat], x: &DVector<f64>) -> CMat {
    basis.iter().zip(x.iter()).fold(CMat::zeros(basis[0].nrows(), basis[0].ncols()), |acc, (b, &v)| acc + b.scale(v))
}

fn completeness_op(chi: &CMat) -> CMat {
    let a = pauli_basis();
    let mut out = CMat::zeros(2, 2);
    for n in 0..4 {
        for m in 0..4 {
            out += (a[m].adjoint() * &a[n]) * chi[(n, m)];
        }
    }
    out
}

struct Problem {
    chi_basis: Vec<CMat>,
    out_basis: Vec<CMat>,
    phi: DMatrix<f64>,
    /// Completeness map in coordinates, and Mᵀ(MMᵀ)⁻¹.
    m: DMatrix<f64>,
    m_pinv: DMatrix<f64>,
}

impl Problem {
    fn new(table: &FrequencyTable) -> Result<Self> {
        let chi_basis = hermitian_basis(4);
        let out_basis = hermitian_basis(2);
        let a = pauli_basis();
        let rows = table.inputs().len() * table.effects().len();
        let mut phi = DMatrix::zeros(rows, chi_basis.len());
        for (k, h) in chi_basis.iter().enumerate() {
            let mut r = 0;
            for input in table.inputs() {
                let mut out = CMat::zeros(2, 2);
                for n in 0..4 {
                    for m in 0..4 {
                        if h[(n, m)] != c(0.0, 0.0) {
                            out += (&a[n] * &input.op * a[m].adjoint()) * h[(n, m)];
                        }
                    }
                }
                for effect in table.effects() {
                    phi[(r, k)] = trace(&(&out * &effect.op)).re;
                    r += 1;
                }
            }
        }
        let m = DMatrix::from_fn(out_basis.len(), chi_basis.len(), |i, k| {
            trace(&(&out_basis[i] * completeness_op(&chi_basis[k]))).re
        });
        let mmt = &m * m.transpose();
        let inv = mmt.try_inverse().ok_or(Error::RankDeficient("completeness map"))?;
        let m_pinv = m.transpose() * inv;
        Ok(Self { chi_basis, out_basis, phi, m, m_pinv })
    }

    fn project_psd(&self, x: &DVector<f64>) -> DVector<f64> {
        coords(&self.chi_basis, &project_psd(&matrix(&self.chi_basis, x)))
    }

    fn project_completeness(&self, x: &DVector<f64>) -> DVector<f64> {
        let y = &self.m * x;
        let clamped = coords(&self.out_basis, &project_below(&matrix(&self.out_basis, &y), 1.0));
        x + &self.m_pinv * (clamped - y)
    }
}

/// Least-squares χ consistent with the observed frequencies, constrained to
/// completely positive, trace-non-increasing maps.
pub fn process_reconstruct(table: &FrequencyTable, options: &ReconstructOptions) -> Result<ProcessMatrix> {
    let p = Problem::new(table)?;
    let f = DVector::from_iterator(
        p.phi.nrows(),
        table.values().iter().flat_map(|row| row.iter().copied()),
    );
    let gram = p.phi.transpose() * &p.phi;
    if gram.clone().cholesky().is_none() {
        return Err(Error::RankDeficient("frequency table"));
    }
    let step = gram.trace() / gram.nrows() as f64;
    let n = gram.nrows();
    let k = gram + DMatrix::identity(n, n) * (2.0 * step);
    let chol = k.cholesky().ok_or(Error::RankDeficient("frequency table"))?;
    let rhs0 = p.phi.transpose() * &f;

    let mut z1 = DVector::zeros(n);
    let mut z2 = DVector::zeros(n);
    let mut u1 = DVector::zeros(n);
    let mut u2 = DVector::zeros(n);
    let mut converged = false;
    for _ in 0..options.max_iterations {
        let x = chol.solve(&(&rhs0 + (&z1 - &u1 + &z2 - &u2) * step));
        let z1_new = p.project_psd(&(&x + &u1));
        let z2_new = p.project_completeness(&(&x + &u2));
        u1 += &x - &z1_new;
        u2 += &x - &z2_new;
        let primal = (&x - &z1_new).norm().max((&x - &z2_new).norm());
        let dual = step * ((&z1_new - &z1).norm() + (&z2_new - &z2).norm());
        z1 = z1_new;
        z2 = z2_new;
        if primal < options.tolerance && dual < options.tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(options.max_iterations));
    }
    // z1 is exactly PSD; remove any residual trace increase by scaling.
    let mut chi = matrix(&p.chi_basis, &z1);
    let top = max_eigenvalue(&completeness_op(&chi));
    if top > 1.0 {
        chi.unscale_mut(top);
    }
    ProcessMatrix::new(chi)
}
