use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::linalg::{c, CVec};
use crate::fock::quadrature::hermite_functions;
use crate::fock::random::rng;
use crate::fock::{DensityMatrix, QuadratureConvention};

/// One homodyne outcome: LO phase and quadrature value in σ0 units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSample {
    #[serde(rename = "lo_phase_rad")]
    pub lo_phase: f64,
    #[serde(rename = "q_sigma0")]
    pub value: f64,
}

/// Grid points per internal quadrature unit for inverse-CDF sampling.
const GRID_DENSITY: f64 = 400.0;

/// Marginal density pr(x|θ) = ⟨x_θ|ρ|x_θ⟩ in internal units.
pub fn quadrature_density(rho: &DensityMatrix, theta: f64, x: f64) -> f64 {
    let dim = rho.dim();
    let psi = hermite_functions(dim, x);
    let v = CVec::from_fn(dim, |m, _| c(psi[m], 0.0) * num_complex::Complex64::from_polar(1.0, m as f64 * theta));
    (v.adjoint() * rho.data() * &v)[(0, 0)].re.max(0.0)
}

/// Synthetic homodyne data: `n_per_phase` draws at each LO phase, from a
/// single seeded stream in phase order.
pub fn sample_quadratures(rho: &DensityMatrix, phases: &[f64], n_per_phase: usize, seed: u64) -> Result<Vec<QuadratureSample>> {
    if rho.layout().len() != 1 {
        return Err(Error::InvalidState("quadrature sampling needs a single mode".into()));
    }
    let rho = rho.normalize()?;
    let half = (2.0 * rho.dim() as f64 + 1.0).sqrt() + 6.0;
    let n = (2.0 * half * GRID_DENSITY) as usize + 1;
    let h = 2.0 * half / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|k| -half + k as f64 * h).collect();
    let conv = QuadratureConvention::default();
    let mut gen = rng(seed);
    let mut out = Vec::with_capacity(phases.len() * n_per_phase);
    for &theta in phases {
        let pdf: Vec<f64> = xs.iter().map(|&x| quadrature_density(&rho, theta, x)).collect();
        let mut cdf = vec![0.0; n];
        for k in 1..n {
            cdf[k] = cdf[k - 1] + 0.5 * h * (pdf[k] + pdf[k - 1]);
        }
        let total = cdf[n - 1];
        for _ in 0..n_per_phase {
            let u = gen.random::<f64>() * total;
            let k = cdf.partition_point(|&v| v < u).clamp(1, n - 1);
            let span = cdf[k] - cdf[k - 1];
            let t = if span > 0.0 { (u - cdf[k - 1]) / span } else { 0.5 };
            let x = xs[k - 1] + t * h;
            out.push(QuadratureSample { lo_phase: theta, value: conv.to_sigma0(x) });
        }
    }
    Ok(out)
}
