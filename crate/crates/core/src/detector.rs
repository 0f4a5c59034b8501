//! Click-detector models, selectable by name.

use std::sync::Arc;

use crate::error::{check_unit, Error, Result};
use crate::fock::linalg::{c, CMat};
use crate::fock::Operator;

/// A heralding detector, described by the POVM element of the accepted
/// outcome on a truncated mode.
pub trait HeraldDetector: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;
    fn efficiency(&self) -> f64;
    /// Diagonal click probabilities p(n) for n = 0..dim.
    fn click_probabilities(&self, dim: usize) -> Vec<f64>;

    fn povm(&self, dim: usize) -> Operator {
        let p = self.click_probabilities(dim);
        let mut m = CMat::zeros(dim, dim);
        for (n, w) in p.into_iter().enumerate() {
            m[(n, n)] = c(w, 0.0);
        }
        Operator::single(m)
    }
}

/// Non-resolving click detector: 1 − (1 − η)^n for 1 ≤ n ≤ n_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bucket {
    pub eta: f64,
    /// `None` sums up to the truncation.
    pub n_max: Option<usize>,
}

impl HeraldDetector for Bucket {
    fn name(&self) -> &'static str {
        if self.n_max.is_some() { "bucket" } else { "bucket-full" }
    }

    fn efficiency(&self) -> f64 {
        self.eta
    }

    fn click_probabilities(&self, dim: usize) -> Vec<f64> {
        let top = self.n_max.unwrap_or(usize::MAX);
        (0..dim)
            .map(|n| if n == 0 || n > top { 0.0 } else { 1.0 - (1.0 - self.eta).powi(n as i32) })
            .collect()
    }
}

/// Photon-number-resolving detector accepting exactly one photon; the
/// efficiency scales the acceptance probability only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pnr {
    pub eta: f64,
}

impl HeraldDetector for Pnr {
    fn name(&self) -> &'static str {
        "pnr"
    }

    fn efficiency(&self) -> f64 {
        self.eta
    }

    fn click_probabilities(&self, dim: usize) -> Vec<f64> {
        (0..dim).map(|n| if n == 1 { self.eta } else { 0.0 }).collect()
    }
}

type Factory = fn(f64) -> Arc<dyn HeraldDetector>;

const REGISTRY: &[(&str, Factory)] = &[
    ("bucket", |eta| Arc::new(Bucket { eta, n_max: Some(2) })),
    ("bucket-full", |eta| Arc::new(Bucket { eta, n_max: None })),
    ("pnr", |eta| Arc::new(Pnr { eta })),
];

pub fn detector_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

pub fn detector(name: &str, eta: f64) -> Result<Arc<dyn HeraldDetector>> {
    check_unit("detector efficiency", eta)?;
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, make)| make(eta))
        .ok_or_else(|| Error::UnknownName {
            kind: "detector",
            name: name.to_string(),
            available: detector_names().join(", "),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bucket_povm_values() {
        let perfect = detector("bucket", 1.0).unwrap().click_probabilities(3);
        assert_eq!(perfect, vec![0.0, 1.0, 1.0]);
        let real = detector("bucket", 0.3).unwrap().click_probabilities(3);
        assert!((real[1] - 0.3).abs() < 1e-15 && (real[2] - 0.51).abs() < 1e-15);
        assert_eq!(real[0], 0.0);
        let dead = detector("bucket", 0.0).unwrap().click_probabilities(3);
        assert!(dead.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn bucket_truncates_at_two_photons() {
        let p = detector("bucket", 0.3).unwrap().click_probabilities(5);
        assert_eq!(p[3], 0.0);
        let full = detector("bucket-full", 0.3).unwrap().click_probabilities(5);
        assert!((full[3] - (1.0 - 0.7f64.powi(3))).abs() < 1e-15);
    }

    #[test]
    fn bucket_effect_is_bounded() {
        let p = detector("bucket", 0.42).unwrap().povm(3);
        for n in 0..3 {
            let v = p.data[(n, n)].re;
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn unknown_detector_lists_names() {
        let err = detector("spad", 0.5).unwrap_err();
        assert!(err.to_string().contains("pnr"));
        assert!(detector("pnr", 1.5).is_err());
    }
}
