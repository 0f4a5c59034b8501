use rayon::prelude::*;
use serde::Serialize;

use super::logical::LogicalBasis;
use super::params::ProtocolParams;
use super::pipeline::{hybrid_resource, input_state, run_conversion};
use crate::benchmarks::conversion_fidelity;
use crate::error::Result;
use crate::fock::{DensityMatrix, Window};
use crate::sources::{canonical_qubits, HybridSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    /// Full window width in σ0 units, or "none".
    pub delta_sigma0: String,
    pub fidelity: f64,
    pub success_prob: f64,
    pub window_acceptance: f64,
}

/// Conversion fidelity and rates for each window width.
pub fn sweep_window(
    rho_in: &DensityMatrix,
    rho_bc: &DensityMatrix,
    params: &ProtocolParams,
    windows: &[Window],
    target: LogicalBasis,
) -> Result<Vec<SweepPoint>> {
    windows
        .par_iter()
        .map(|&window| {
            let p = ProtocolParams { window, ..params.clone() };
            let res = run_conversion(rho_in, rho_bc, &p)?;
            Ok(SweepPoint {
                delta_sigma0: window.label(),
                fidelity: conversion_fidelity(rho_in, &res.output, target)?,
                success_prob: res.success_prob,
                window_acceptance: res.window_acceptance,
            })
        })
        .collect()
}

/// Window acceptance pooled over the six canonical inputs: total successes
/// divided by total heralds, with every input sent equally often.
pub fn six_input_acceptance(hybrid: &HybridSpec, params: &ProtocolParams) -> Result<f64> {
    let rho_bc = hybrid_resource(hybrid, params)?;
    let runs = canonical_qubits()
        .par_iter()
        .map(|(_, q)| run_conversion(&input_state(q, params)?, &rho_bc, params))
        .collect::<Result<Vec<_>>>()?;
    let success: f64 = runs.iter().map(|r| r.success_prob).sum();
    let clicks: f64 = runs.iter().map(|r| r.click_prob).sum();
    Ok(success / clicks)
}
