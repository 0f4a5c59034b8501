use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sampling::QuadratureSample;
use crate::error::{check_unit, Error, Result};
use crate::fock::linalg::{hermitian_part, max_abs, trace, CMat};
use crate::fock::quadrature::{interval_overlaps, rotate_to_phase};
use crate::fock::{loss_adjoint, DensityMatrix, ModeLayout, QuadratureConvention};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MaxLikOptions {
    /// Histogram bins per LO phase.
    pub bins: usize,
    /// Half-range of the histogram, σ0 units.
    pub range_sigma0: f64,
    pub max_iterations: usize,
    /// Stop once the largest element change of ρ drops below this.
    pub tolerance: f64,
}

impl Default for MaxLikOptions {
    fn default() -> Self {
        Self { bins: 200, range_sigma0: 5.0, max_iterations: 2000, tolerance: 1e-7 }
    }
}

#[derive(Debug, Clone)]
pub struct MaxLikResult {
    pub state: DensityMatrix,
    pub iterations: usize,
    pub converged: bool,
    /// Log-likelihood after each accepted iteration, starting from the initial guess.
    pub log_likelihood: Vec<f64>,
    /// Samples outside the histogram range, ignored.
    pub discarded: usize,
}

struct Bin {
    effect: CMat,
    frequency: f64,
}

fn log_likelihood(bins: &[Bin], rho: &CMat) -> f64 {
    bins.iter().map(|b| b.frequency * prob(&b.effect, rho).ln()).sum()
}

fn prob(effect: &CMat, rho: &CMat) -> f64 {
    // Tr(Π ρ) for Hermitian Π, ρ.
    effect.iter().zip(rho.transpose().iter()).map(|(a, b)| (a * b).re).sum::<f64>().max(1e-300)
}

/// Maximum-likelihood state from binned homodyne data, correcting for
/// detection efficiency `eta` by folding loss into the measurement effects.
///
/// Uses the diluted iteration ρ → (1 + εR) ρ (1 + εR) / N, shrinking ε
/// whenever a step would lower the likelihood.
pub fn maxlik_reconstruct(samples: &[QuadratureSample], dim: usize, eta: f64, options: &MaxLikOptions) -> Result<MaxLikResult> {
    check_unit("eta", eta)?;
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    if samples.is_empty() || options.bins == 0 || !(options.range_sigma0 > 0.0) {
        return Err(Error::Format("maxlik needs samples, bins and a positive range".into()));
    }
    let conv = QuadratureConvention::default();
    let width = 2.0 * options.range_sigma0 / options.bins as f64;
    // Histogram keyed by the exact phase value, so sample order is irrelevant.
    let mut hist: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut discarded = 0;
    for s in samples {
        if !s.value.is_finite() || !s.lo_phase.is_finite() {
            return Err(Error::Format("non-finite quadrature sample".into()));
        }
        let k = ((s.value + options.range_sigma0) / width).floor();
        if k < 0.0 || k >= options.bins as f64 {
            discarded += 1;
            continue;
        }
        hist.entry(s.lo_phase.to_bits()).or_insert_with(|| vec![0; options.bins])[k as usize] += 1;
    }
    let kept = (samples.len() - discarded) as f64;
    if kept == 0.0 {
        return Err(Error::ZeroProbability);
    }
    let base: Vec<CMat> = (0..options.bins)
        .map(|k| {
            let lo = -options.range_sigma0 + k as f64 * width;
            let a = interval_overlaps(dim, conv.to_internal(lo), conv.to_internal(lo + width));
            loss_adjoint(&a, eta)
        })
        .collect::<Result<_>>()?;
    let mut bins = Vec::new();
    for (phase_bits, counts) in &hist {
        let theta = f64::from_bits(*phase_bits);
        for (k, &n) in counts.iter().enumerate() {
            if n > 0 {
                bins.push(Bin { effect: rotate_to_phase(&base[k], theta), frequency: n as f64 / kept });
            }
        }
    }

    let identity = CMat::identity(dim, dim);
    let mut rho = identity.unscale(dim as f64);
    let mut ll = log_likelihood(&bins, &rho);
    let mut history = vec![ll];
    let mut eps = 1e3;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iterations {
        iterations += 1;
        let mut r = CMat::zeros(dim, dim);
        for b in &bins {
            r += b.effect.scale(b.frequency / prob(&b.effect, &rho));
        }
        let (next, next_ll) = loop {
            let g = &identity + r.scale(eps);
            let mut m = hermitian_part(&(&g * &rho * &g));
            let t = trace(&m).re;
            m.unscale_mut(t);
            let l = log_likelihood(&bins, &m);
            if l >= ll - 1e-12 * ll.abs() || eps < 1e-12 {
                break (m, l);
            }
            eps *= 0.5;
        };
        debug_assert!(next_ll >= ll - 1e-9 * ll.abs(), "likelihood decreased: {ll} -> {next_ll}");
        let change = max_abs(&(&next - &rho));
        rho = next;
        ll = next_ll;
        history.push(ll);
        eps = (eps * 2.0).min(1e3);
        if change < options.tolerance {
            converged = true;
            break;
        }
    }
    let mut data = rho;
    // Trace is exactly one up to rounding; restore it after the last step.
    let t = trace(&data).re;
    data.unscale_mut(t);
    let state = DensityMatrix::new(ModeLayout::single("C", dim)?, data, true)?;
    Ok(MaxLikResult { state, iterations, converged, log_likelihood: history, discarded })
}
