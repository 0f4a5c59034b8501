use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::detector::HeraldDetector;
use crate::error::{check_unit, Error, Result};
use crate::fock::linalg::{c, CMat, CVec};
use crate::fock::{displacement_op, DensityMatrix, ModeLayout};

pub const INPUT_MODE: &str = "A";

/// Reduce an angle to (−π, π].
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI { t - 2.0 * PI } else { t }
}

/// DV qubit c0|0⟩ + c1 e^{iθ}|1⟩ with c1 = √(1 − c0²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QubitSpecRaw", into = "QubitSpecRaw")]
pub struct QubitSpec {
    c0: f64,
    theta: f64,
}

#[derive(Serialize, Deserialize)]
struct QubitSpecRaw {
    c0: f64,
    #[serde(default)]
    theta_rad: f64,
}

impl TryFrom<QubitSpecRaw> for QubitSpec {
    type Error = Error;
    fn try_from(r: QubitSpecRaw) -> Result<Self> {
        QubitSpec::new(r.c0, r.theta_rad)
    }
}

impl From<QubitSpec> for QubitSpecRaw {
    fn from(q: QubitSpec) -> Self {
        Self { c0: q.c0, theta_rad: q.theta }
    }
}

/// Relative-phase convention when mapping the displacement phase to θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaConvention {
    /// θ = −arg β, what the heralding simulation produces for real λ > 0.
    Exact,
    /// θ = π − arg β, the lab lock-point convention.
    #[default]
    Paper,
}

impl QubitSpec {
    pub fn new(c0: f64, theta: f64) -> Result<Self> {
        check_unit("c0", c0)?;
        if !theta.is_finite() {
            return Err(Error::OutOfRange { name: "theta", value: theta });
        }
        Ok(Self { c0, theta: wrap_angle(theta) })
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn c1(&self) -> f64 {
        (1.0 - self.c0 * self.c0).max(0.0).sqrt()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Amplitudes (c0, c1 e^{iθ}).
    pub fn amplitudes(&self) -> (C64, C64) {
        (c(self.c0, 0.0), C64::from_polar(self.c1(), self.theta))
    }

    pub fn ket(&self, dim: usize) -> CVec {
        let mut v = CVec::zeros(dim);
        let (a0, a1) = self.amplitudes();
        v[0] = a0;
        if dim > 1 {
            v[1] = a1;
        }
        v
    }

    /// 2×2 logical density matrix of the pure qubit.
    pub fn logical(&self) -> CMat {
        let v = self.ket(2);
        &v * v.adjoint()
    }
}

/// Qubit weights from herald count rates: c0 = √(N_disp/(N_disp + N_OPO)).
pub fn qubit_from_counts(n_opo: f64, n_disp: f64, arg_beta: f64, convention: ThetaConvention) -> Result<QubitSpec> {
    if n_opo < 0.0 || n_disp < 0.0 {
        return Err(Error::OutOfRange { name: "count rate", value: n_opo.min(n_disp) });
    }
    if n_opo + n_disp <= 0.0 {
        return Err(Error::OutOfRange { name: "total count rate", value: 0.0 });
    }
    let c0 = (n_disp / (n_disp + n_opo)).sqrt();
    let theta = match convention {
        ThetaConvention::Exact => -arg_beta,
        ThetaConvention::Paper => PI - arg_beta,
    };
    QubitSpec::new(c0, theta)
}

/// ρ_A = (1 − η)|0⟩⟨0| + η|Q⟩⟨Q|.
pub fn prepare_dv_qubit_ideal(spec: &QubitSpec, eta_qubit: f64, dim: usize) -> Result<DensityMatrix> {
    check_unit("eta_qubit", eta_qubit)?;
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let q = spec.ket(dim);
    let mut m = (&q * q.adjoint()).scale(eta_qubit);
    m[(0, 0)] += c(1.0 - eta_qubit, 0.0);
    DensityMatrix::new(ModeLayout::single(INPUT_MODE, dim)?, m, true)
}

/// The six canonical inputs {|0⟩, |1⟩, |0⟩±|1⟩, |0⟩±i|1⟩}.
pub fn canonical_qubits() -> Vec<(&'static str, QubitSpec)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        ("0", QubitSpec { c0: 1.0, theta: 0.0 }),
        ("1", QubitSpec { c0: 0.0, theta: 0.0 }),
        ("0+1", QubitSpec { c0: h, theta: 0.0 }),
        ("0-1", QubitSpec { c0: h, theta: PI }),
        ("0+i1", QubitSpec { c0: h, theta: PI / 2.0 }),
        ("0-i1", QubitSpec { c0: h, theta: -PI / 2.0 }),
    ]
}

/// Limit on probability mass lost to truncation in heralded preparation.
pub const HERALD_TAIL_LIMIT: f64 = 1e-8;
const HERALD_PADDING: usize = 12;

/// Heralded DV qubit: TMSV Σ λⁿ|n,n⟩, displacement D(β) on the herald arm B,
/// a click on B, then B traced out. Returns the normalized state of A and
/// the herald probability.
pub fn prepare_dv_qubit_heralded(
    lambda: f64,
    beta: C64,
    detector: &dyn HeraldDetector,
    dim_a: usize,
    dim_b: usize,
) -> Result<(DensityMatrix, f64)> {
    if !(0.0..1.0).contains(&lambda.abs()) {
        return Err(Error::OutOfRange { name: "lambda", value: lambda });
    }
    let pa = dim_a + HERALD_PADDING;
    let pb = dim_b + HERALD_PADDING;
    let layout = ModeLayout::new([(INPUT_MODE, pa), ("herald", pb)])?;
    let mut ket = CVec::zeros(pa * pb);
    let mut amp = 1.0;
    for n in 0..pa.min(pb) {
        ket[n * pb + n] = c(amp, 0.0);
        amp *= lambda;
    }
    let ket = ket.unscale(ket.norm());
    let rho = DensityMatrix::new(layout, &ket * ket.adjoint(), false)?;
    let displaced = rho.apply_unitary(&["herald"], &displacement_op(pb, beta))?;
    let heralded = displaced.measure("herald", &detector.povm(pb))?;
    let prob = heralded.trace();
    if prob <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    let full = heralded.data();
    let kept: f64 = (0..dim_a).map(|n| full[(n, n)].re).sum();
    // pair mass beyond the requested truncation plus heralded mass beyond dim_a
    let tail = lambda.abs().powi(2 * dim_a.min(dim_b) as i32) + (1.0 - kept / prob);
    if tail > HERALD_TAIL_LIMIT {
        return Err(Error::Truncation { tail, limit: HERALD_TAIL_LIMIT });
    }
    let cropped = full.view((0, 0), (dim_a, dim_a)).into_owned().unscale(kept);
    let state = DensityMatrix::new(ModeLayout::single(INPUT_MODE, dim_a)?, cropped, true)?;
    Ok((state, prob))
}

/// Convenience: embed a 2×2 logical matrix into the lowest Fock levels.
pub fn embed_logical(m: &CMat, dim: usize) -> CMat {
    let mut out = CMat::zeros(dim, dim);
    out.view_mut((0, 0), (2, 2)).copy_from(m);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{Bucket, Pnr};
    use crate::fock::uhlmann_fidelity;

    #[test]
    fn counts_to_qubit() {
        let q = qubit_from_counts(100.0, 0.0, 1.3, ThetaConvention::Paper).unwrap();
        assert_eq!(q.c0(), 0.0);
        let q = qubit_from_counts(50.0, 50.0, 0.0, ThetaConvention::Paper).unwrap();
        assert!((q.c0() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let q = qubit_from_counts(1.0, 1.0, PI, ThetaConvention::Paper).unwrap();
        assert!(q.theta().abs() < 1e-15);
        assert!(qubit_from_counts(0.0, 0.0, 0.0, ThetaConvention::Paper).is_err());
    }

    #[test]
    fn theta_is_wrapped() {
        let q = QubitSpec::new(0.5, 3.0 * PI).unwrap();
        assert!((q.theta() - PI).abs() < 1e-12);
        let q = QubitSpec::new(0.5, -PI).unwrap();
        assert!((q.theta() - PI).abs() < 1e-12);
        assert!((q.c0().powi(2) + q.c1().powi(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ideal_preparation() {
        let one = QubitSpec::new(0.0, 0.0).unwrap();
        let rho = prepare_dv_qubit_ideal(&one, 1.0, 5).unwrap();
        assert_eq!(rho.element(1, 1), c(1.0, 0.0));
        let rho = prepare_dv_qubit_ideal(&one, 0.72, 5).unwrap();
        assert!((rho.element(0, 0).re - 0.28).abs() < 1e-15);
        assert!((rho.element(1, 1).re - 0.72).abs() < 1e-15);
        let bal = QubitSpec::new(std::f64::consts::FRAC_1_SQRT_2, 0.0).unwrap();
        let rho = prepare_dv_qubit_ideal(&bal, 0.72, 5).unwrap();
        // direct construction: η c0 c1 = 0.72 / 2
        assert!((rho.element(0, 1).re - 0.36).abs() < 1e-15);
        assert!((rho.element(1, 1).re - 0.72 * 0.5).abs() < 1e-15);
        rho.validate().unwrap();
        assert!(prepare_dv_qubit_ideal(&bal, 1.2, 5).is_err());
    }

    #[test]
    fn heralded_without_displacement_is_single_photon() {
        let (rho, p) = prepare_dv_qubit_heralded(0.02, c(0.0, 0.0), &Pnr { eta: 1.0 }, 6, 6).unwrap();
        assert!(p > 0.0 && p <= 1.0);
        assert!((rho.element(1, 1).re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn heralded_without_pairs_is_vacuum() {
        let (rho, _) = prepare_dv_qubit_heralded(0.0, c(0.05, 0.0), &Pnr { eta: 1.0 }, 6, 6).unwrap();
        assert!((rho.element(0, 0).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn heralded_balanced_qubit() {
        let (rho, _) = prepare_dv_qubit_heralded(0.02, c(0.02, 0.0), &Pnr { eta: 1.0 }, 8, 8).unwrap();
        let ratio = (rho.element(1, 1).re / rho.element(0, 0).re).sqrt();
        assert!((ratio - 1.0).abs() < 1e-3);
    }

    #[test]
    fn heralded_matches_counts_model() {
        for (lambda, beta) in [(0.02, c(0.01, 0.0)), (0.015, C64::from_polar(0.02, 0.8)), (0.01, C64::from_polar(0.005, -2.0))] {
            let (rho, _) = prepare_dv_qubit_heralded(lambda, beta, &Pnr { eta: 1.0 }, 6, 6).unwrap();
            let q = qubit_from_counts(lambda * lambda, beta.norm_sqr(), beta.arg(), ThetaConvention::Exact).unwrap();
            let ideal = prepare_dv_qubit_ideal(&q, 1.0, 6).unwrap();
            assert!(uhlmann_fidelity(&rho, &ideal).unwrap() >= 0.9999);
        }
    }

    #[test]
    fn heralded_bucket_and_truncation_error() {
        let (rho, p_bucket) = prepare_dv_qubit_heralded(0.05, c(0.0, 0.0), &Bucket { eta: 0.3, n_max: None }, 6, 6).unwrap();
        assert!(p_bucket > 0.0);
        assert!(rho.element(1, 1).re > 0.99);
        assert!(matches!(
            prepare_dv_qubit_heralded(0.6, c(0.0, 0.0), &Pnr { eta: 1.0 }, 3, 3),
            Err(Error::Truncation { .. })
        ));
    }
}
