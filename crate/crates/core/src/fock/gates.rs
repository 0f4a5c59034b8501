//! Ladder operators and Gaussian unitaries.
//!
//! Exponentials are taken in a padded space and cropped, so matrix elements
//! between low Fock states are exact to machine precision rather than
//! polluted by the truncation edge.

use num_complex::Complex64 as C64;

use super::linalg::{self, c, CMat, CVec};
use super::state::{DensityMatrix, Operator};
use crate::error::{check_unit, Error, Result};

/// Extra Fock levels used when exponentiating single-mode generators.
pub const EXP_PADDING: usize = 40;

pub fn annihilation(dim: usize) -> CMat {
    let mut a = CMat::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn number(dim: usize) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(dim, (0..dim).map(|n| c(n as f64, 0.0))))
}

fn crop(m: &CMat, dim: usize) -> CMat {
    m.view((0, 0), (dim, dim)).into_owned()
}

fn padded_exp(dim: usize, generator: impl Fn(&CMat) -> CMat) -> CMat {
    let big = dim + EXP_PADDING;
    let a = annihilation(big);
    linalg::expm(&generator(&a))
}

/// D(β) = exp(β a† − β* a)
pub fn displacement_op(dim: usize, beta: C64) -> Operator {
    let full = padded_exp(dim, |a| {
        let ad = a.adjoint();
        ad.scale(1.0) * beta - a * beta.conj()
    });
    Operator::single(crop(&full, dim))
}

/// S(r) = exp[(r/2)(a² − a†²)]; for r > 0 the x-quadrature of S(r)|0⟩ is squeezed.
pub fn squeezing_op(dim: usize, r: f64) -> Operator {
    let full = padded_exp(dim, |a| {
        let ad = a.adjoint();
        (a * a - &ad * &ad).scale(r / 2.0)
    });
    Operator::single(crop(&full, dim))
}

/// S(r)|0⟩ on `dim + EXP_PADDING` levels, used for truncation-tail checks.
pub(crate) fn squeezed_vacuum_padded(dim: usize, r: f64) -> CVec {
    let full = padded_exp(dim, |a| {
        let ad = a.adjoint();
        (a * a - &ad * &ad).scale(r / 2.0)
    });
    full.column(0).into_owned()
}

/// Coherent-state amplitudes ⟨n|α⟩ from the Fock series.
pub fn coherent_ket(dim: usize, alpha: C64) -> CVec {
    let mut v = CVec::zeros(dim);
    let pre = (-alpha.norm_sqr() / 2.0).exp();
    let mut term = c(pre, 0.0);
    for n in 0..dim {
        v[n] = term;
        term = term * alpha / ((n + 1) as f64).sqrt();
    }
    v
}

/// Two-mode beamsplitter U = exp[θ(a†b − a b†)] with T = cos²θ, on the
/// truncated space (dim_i, dim_j), local index `i * dim_j + j`.
///
/// Built photon-number-sector exact: the generator is exponentiated with
/// each mode able to hold every photon present, then cropped.
pub fn beamsplitter_unitary(dim_i: usize, dim_j: usize, transmittance: f64) -> Result<Operator> {
    check_unit("transmittance", transmittance)?;
    let theta = transmittance.sqrt().acos();
    let p = dim_i + dim_j - 1;
    let a = linalg::kron(&annihilation(p), &CMat::identity(p, p));
    let b = linalg::kron(&CMat::identity(p, p), &annihilation(p));
    let gen = (a.adjoint() * &b - &a * b.adjoint()).scale(theta);
    let u = linalg::expm(&gen);
    let idx: Vec<usize> = (0..dim_i)
        .flat_map(|i| (0..dim_j).map(move |j| i * p + j))
        .collect();
    let data = CMat::from_fn(idx.len(), idx.len(), |r, k| u[(idx[r], idx[k])]);
    Operator::new(vec![dim_i, dim_j], data)
}

/// Mix two modes of a state on a beamsplitter with transmittance `t`.
///
/// Amplitude pushed beyond a mode's truncation is dropped; if that lowers
/// the trace the result is flagged unnormalized.
pub fn beamsplitter(rho: &DensityMatrix, mode_i: &str, mode_j: &str, t: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { name: "transmittance", value: t });
    }
    let di = rho.layout().dim_of(mode_i)?;
    let dj = rho.layout().dim_of(mode_j)?;
    let u = beamsplitter_unitary(di, dj, t)?;
    let out = rho.apply_unitary(&[mode_i, mode_j], &u)?;
    if out.is_normalized() && (out.trace() - 1.0).abs() > super::state::TRACE_TOL {
        return Ok(out.scaled(1.0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::layout::ModeLayout;
    use crate::fock::linalg::max_abs;
    use crate::fock::state::tensor;

    #[test]
    fn displacement_of_zero_is_identity() {
        let d = displacement_op(8, c(0.0, 0.0));
        assert!(max_abs(&(d.data - CMat::identity(8, 8))) < 1e-14);
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        for beta in [c(0.5, 0.0), c(-0.3, 0.7), c(0.0, 1.0)] {
            let d = displacement_op(20, beta);
            let ket = d.data.column(0).into_owned();
            let oracle = coherent_ket(20, beta);
            assert!((&ket - &oracle).norm() < 1e-10);
            let mean = (ket.adjoint() * annihilation(20) * &ket)[(0, 0)];
            assert!((mean - beta).norm() < 1e-6);
        }
    }

    #[test]
    fn four_db_squeezing_variance() {
        let r = crate::sources::db_to_r(4.0);
        assert!((r - 0.4605).abs() < 1e-4);
        let dim = 30;
        let s = squeezing_op(dim, r);
        let ket = s.data.column(0).into_owned();
        let a = annihilation(dim);
        let x = (&a + a.adjoint()).scale(std::f64::consts::FRAC_1_SQRT_2);
        let var = (ket.adjoint() * &x * &x * &ket)[(0, 0)].re;
        let ratio = var / 0.5;
        assert!((ratio - (-2.0 * r).exp()).abs() < 1e-6);
        assert!((ratio - 0.398).abs() < 1e-3);
    }

    #[test]
    fn beamsplitter_full_transmission_is_identity() {
        let u = beamsplitter_unitary(4, 3, 1.0).unwrap();
        assert!(max_abs(&(u.data - CMat::identity(12, 12))) < 1e-14);
        assert!(beamsplitter_unitary(2, 2, 1.5).is_err());
    }

    #[test]
    fn single_photon_splits_evenly() {
        let layout = ModeLayout::new([("i", 3), ("j", 3)]).unwrap();
        let mut ket = CVec::zeros(9);
        ket[3] = c(1.0, 0.0); // |1,0>
        let rho = DensityMatrix::pure(layout, &ket).unwrap();
        let out = beamsplitter(&rho, "i", "j", 0.5).unwrap();
        assert!((out.element(3, 3).re - 0.5).abs() < 1e-14);
        assert!((out.element(1, 1).re - 0.5).abs() < 1e-14);
        assert!((out.element(3, 1).norm() - 0.5).abs() < 1e-14);
        let n_total = out.mean_photon_number("i").unwrap() + out.mean_photon_number("j").unwrap();
        assert!((n_total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        // dense matrix-exponential oracle on a generously padded space
        let p = 6;
        let a = linalg::kron(&annihilation(p), &CMat::identity(p, p));
        let b = linalg::kron(&CMat::identity(p, p), &annihilation(p));
        let theta = std::f64::consts::FRAC_PI_4;
        let u = linalg::expm(&(a.adjoint() * &b - &a * b.adjoint()).scale(theta));
        let oracle_11 = u[(p + 1, p + 1)];
        assert!(oracle_11.norm() < 1e-14);

        let one = DensityMatrix::fock("i", 3, 1).unwrap();
        let one_j = DensityMatrix::fock("j", 3, 1).unwrap();
        let rho = tensor(&[&one, &one_j]).unwrap();
        let out = beamsplitter(&rho, "i", "j", 0.5).unwrap();
        assert!(out.element(4, 4).norm() < 1e-14);
        assert!((out.element(6, 6).re - 0.5).abs() < 1e-14);
        assert!((out.element(2, 2).re - 0.5).abs() < 1e-14);
    }
}
