use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::fock::gates::{annihilation, squeezed_vacuum_padded};
use crate::fock::linalg::{c, CVec};
use crate::fock::{loss_channel, DensityMatrix, ModeLayout};

pub const DV_MODE: &str = "B";
pub const CV_MODE: &str = "C";

/// dB = 10 log10(e^{2r})
pub fn db_to_r(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

pub fn r_to_db(r: f64) -> f64 {
    20.0 * r / std::f64::consts::LN_10
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Normalized |α⟩ ± |−α⟩ on `dim` levels (real α), built from the coherent series.
pub fn cat_ket(alpha: f64, parity: Parity, dim: usize) -> Result<CVec> {
    let keep = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut v = CVec::zeros(dim);
    let mut term = 1.0;
    for n in 0..dim {
        if n % 2 == keep {
            v[n] = c(term, 0.0);
        }
        term *= alpha / ((n + 1) as f64).sqrt();
    }
    let norm = v.norm();
    if norm < 1e-12 {
        return Err(Error::DegenerateBasis(format!("{parity:?} cat with alpha = {alpha}")));
    }
    Ok(v.unscale(norm))
}

pub fn cat_state(alpha: f64, parity: Parity, dim: usize) -> Result<DensityMatrix> {
    DensityMatrix::pure(ModeLayout::single(CV_MODE, dim)?, &cat_ket(alpha, parity, dim)?)
}

/// Truncation tail allowed for the squeezed resource basis.
pub const CV_TAIL_LIMIT: f64 = 1e-6;

/// Experimental CV basis {S|0⟩, a S|0⟩} (each normalized).
///
/// The squeezing is oriented so the state is stretched along x, matching
/// cat states of real amplitude: all Fock amplitudes are positive.
#[derive(Debug, Clone)]
pub struct CvBasis {
    pub even: CVec,
    pub odd: CVec,
    pub tail_even: f64,
    pub tail_odd: f64,
}

impl CvBasis {
    pub fn new(dim: usize, r: f64) -> Result<Self> {
        if r == 0.0 {
            return Err(Error::DegenerateBasis("a S(0)|0> = 0".into()));
        }
        if r < 0.0 {
            return Err(Error::OutOfRange { name: "squeezing", value: r });
        }
        let full = squeezed_vacuum_padded(dim, -r);
        let sub = annihilation(full.len()) * &full;
        let tail = |v: &CVec| 1.0 - v.rows(0, dim).norm_squared() / v.norm_squared();
        let crop = |v: &CVec| {
            let w = v.rows(0, dim).into_owned();
            let n = w.norm();
            w.unscale(n)
        };
        Ok(Self {
            even: crop(&full),
            odd: crop(&sub),
            tail_even: tail(&full),
            tail_odd: tail(&sub),
        })
    }

    pub fn max_tail(&self) -> f64 {
        self.tail_even.max(self.tail_odd)
    }
}

/// Hybrid DV–CV entangled resource a|0⟩|odd⟩ + e^{iψ} b|1⟩|even⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridSpec {
    pub squeezing_db: f64,
    #[serde(rename = "psi_rad")]
    pub psi: f64,
    pub a: f64,
    pub b: f64,
    pub target_alpha: f64,
}

impl Default for HybridSpec {
    /// ψ = π makes the ideal conversion the identity map under the
    /// beamsplitter convention used by the converter.
    fn default() -> Self {
        Self {
            squeezing_db: 4.0,
            psi: std::f64::consts::PI,
            a: 1.0,
            b: 1.0,
            target_alpha: 0.9,
        }
    }
}

impl HybridSpec {
    pub fn r(&self) -> f64 {
        db_to_r(self.squeezing_db)
    }
}

pub fn hybrid_entangled(spec: &HybridSpec, eta_dv: f64, eta_cv: f64, dim_b: usize, dim_c: usize) -> Result<DensityMatrix> {
    check_unit("eta_dv", eta_dv)?;
    check_unit("eta_cv", eta_cv)?;
    if spec.squeezing_db < 0.0 {
        return Err(Error::OutOfRange { name: "squeezing_db", value: spec.squeezing_db });
    }
    if dim_b < 2 {
        return Err(Error::InvalidDimension(dim_b));
    }
    let weight = (spec.a * spec.a + spec.b * spec.b).sqrt();
    if weight == 0.0 {
        return Err(Error::InvalidState("zero hybrid weights".into()));
    }
    let basis = CvBasis::new(dim_c, spec.r())?;
    if basis.max_tail() > CV_TAIL_LIMIT {
        return Err(Error::Truncation { tail: basis.max_tail(), limit: CV_TAIL_LIMIT });
    }
    let mut ket = CVec::zeros(dim_b * dim_c);
    let phase = C64::from_polar(spec.b / weight, spec.psi);
    for k in 0..dim_c {
        ket[k] = basis.odd[k] * (spec.a / weight);
        ket[dim_c + k] = basis.even[k] * phase;
    }
    let layout = ModeLayout::new([(DV_MODE, dim_b), (CV_MODE, dim_c)])?;
    let rho = DensityMatrix::pure(layout, &ket)?;
    let rho = loss_channel(&rho, DV_MODE, eta_dv)?;
    loss_channel(&rho, CV_MODE, eta_cv)
}
