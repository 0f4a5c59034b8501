use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::fock::Window;

/// Truncation dimensions of the input (A), DV (B), CV (C) and tap (D) modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Default for Dims {
    fn default() -> Self {
        Self { a: 5, b: 5, c: 20, d: 3 }
    }
}

impl Dims {
    pub fn grown(&self, by: usize) -> Self {
        Self { a: self.a + by, b: self.b + by, c: self.c + by, d: self.d + by }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Format(format!("bad dims `{s}`"))))
            .collect::<Result<_>>()?;
        match parts[..] {
            [a, b, c, d] => Ok(Self { a, b, c, d }),
            _ => Err(Error::Format(format!("dims need four values A,B,C,D, got `{s}`"))),
        }
    }
}

/// Experimental efficiencies and settings of the conversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolParams {
    pub eta_qubit: f64,
    pub eta_dv: f64,
    pub eta_cv: f64,
    pub squeezing_db: f64,
    pub tap_r: f64,
    pub eta_snspd: f64,
    #[serde(rename = "window_sigma0")]
    pub window: Window,
    pub eta_hd: f64,
    pub chi_temp: f64,
    pub chi_spa: f64,
    /// Detector model name, see [`crate::detector::detector_names`].
    pub detector: String,
    /// Homodyne inefficiency model, see [`super::homodyne_model_names`].
    pub homodyne_loss: String,
    #[serde(rename = "lo_phase_rad")]
    pub lo_phase: f64,
    pub dims: Dims,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self::table_s1()
    }
}

impl ProtocolParams {
    /// Independently measured parameters of the reference experiment.
    pub fn table_s1() -> Self {
        Self {
            eta_qubit: 0.72,
            eta_dv: 0.85,
            eta_cv: 0.85,
            squeezing_db: 4.0,
            tap_r: 0.1,
            eta_snspd: 0.3,
            window: Window::Width(0.5),
            eta_hd: 0.83,
            chi_temp: 0.86,
            chi_spa: 0.98,
            detector: "bucket".into(),
            homodyne_loss: "loss-channel".into(),
            lo_phase: 0.0,
            dims: Dims::default(),
        }
    }

    /// Lossless, PNR-detected, narrow-window limit.
    pub fn ideal() -> Self {
        Self {
            eta_qubit: 1.0,
            eta_dv: 1.0,
            eta_cv: 1.0,
            eta_snspd: 1.0,
            window: Window::Width(0.01),
            eta_hd: 1.0,
            chi_temp: 1.0,
            chi_spa: 1.0,
            detector: "pnr".into(),
            ..Self::table_s1()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eta_qubit", self.eta_qubit),
            ("eta_dv", self.eta_dv),
            ("eta_cv", self.eta_cv),
            ("eta_snspd", self.eta_snspd),
            ("eta_hd", self.eta_hd),
            ("chi_temp", self.chi_temp),
            ("chi_spa", self.chi_spa),
        ] {
            check_unit(name, v)?;
        }
        if !(self.tap_r > 0.0 && self.tap_r < 1.0) {
            return Err(Error::OutOfRange { name: "tap_r", value: self.tap_r });
        }
        if self.squeezing_db < 0.0 {
            return Err(Error::OutOfRange { name: "squeezing_db", value: self.squeezing_db });
        }
        if let Window::Width(w) = self.window {
            if !(w > 0.0) {
                return Err(Error::OutOfRange { name: "window_sigma0", value: w });
            }
        }
        Ok(())
    }
}

/// Mode-matching folded into the homodyne efficiency: χ_temp · χ_spa · η_HD.
pub fn effective_hd_efficiency(params: &ProtocolParams) -> f64 {
    params.chi_temp * params.chi_spa * params.eta_hd
}
