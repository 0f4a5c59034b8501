//! Models of homodyne inefficiency ahead of quadrature conditioning.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fock::linalg::CMat;
use crate::fock::{loss_channel, DensityMatrix, Operator};

/// Applies detection inefficiency `eta` to `mode` and conditions on the
/// window effect, tracing the mode out. The trace of the result is the
/// conditioning probability.
pub trait HomodyneLossModel: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;
    fn condition(&self, rho: &DensityMatrix, mode: &str, eta: f64, window: &Operator) -> Result<DensityMatrix>;
}

/// Physical pure-loss channel on the mode, then the ideal window effect.
#[derive(Debug, Clone, Copy, Default)]
pub struct LossChannel;

impl HomodyneLossModel for LossChannel {
    fn name(&self) -> &'static str {
        "loss-channel"
    }

    fn condition(&self, rho: &DensityMatrix, mode: &str, eta: f64, window: &Operator) -> Result<DensityMatrix> {
        loss_channel(rho, mode, eta)?.measure(mode, window)
    }
}

/// Two-level effect map A00 → A00, A11 → η A11 + (1 − η) A00; exact only on
/// states confined to {|0⟩, |1⟩} of the conditioned mode.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoLevelMap;

impl TwoLevelMap {
    pub fn transform(window: &CMat, eta: f64) -> CMat {
        let mut out = window.clone();
        if window.nrows() > 1 {
            out[(1, 1)] = window[(1, 1)] * eta + window[(0, 0)] * (1.0 - eta);
        }
        out
    }
}

impl HomodyneLossModel for TwoLevelMap {
    fn name(&self) -> &'static str {
        "two-level"
    }

    fn condition(&self, rho: &DensityMatrix, mode: &str, eta: f64, window: &Operator) -> Result<DensityMatrix> {
        let effect = Operator::single(Self::transform(&window.data, eta));
        rho.measure(mode, &effect)
    }
}

type ModelCtor = fn() -> Arc<dyn HomodyneLossModel>;

const REGISTRY: &[(&str, ModelCtor)] = &[
    ("loss-channel", || Arc::new(LossChannel)),
    ("two-level", || Arc::new(TwoLevelMap)),
];

pub fn homodyne_model_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

pub fn homodyne_model(name: &str) -> Result<Arc<dyn HomodyneLossModel>> {
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, make)| make())
        .ok_or_else(|| Error::UnknownName {
            kind: "homodyne loss model",
            name: name.to_string(),
            available: homodyne_model_names().join(", "),
        })
}
