//! Classical measure-and-prepare bounds on teleportation fidelity.
//!
//! An adversary measures the input, obtaining outcome ε with probability
//! p(ε|r⃗), and re-prepares a state. With the four-vector
//! r = (√(1 − |r⃗|²), r⃗) and V_ε = ∫ dρ r p(ε|r⃗), the optimal re-preparation
//! achieves F = ½ (1 + Σ_ε |V_ε|).

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::fock::quadrature::gauss_legendre;

/// Best fidelity for pure inputs with an uninformed prior.
pub const PURE_STATE_BOUND: f64 = 2.0 / 3.0;

/// Normalized radial prior on the Bloch-vector length, as quadrature nodes.
pub trait RadialPrior: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;
    /// Nodes (r, weight) with weights summing to one.
    fn nodes(&self, r_min: f64, r_max: f64, n: usize) -> Result<Vec<(f64, f64)>>;
}

/// w(r) = 4r² / (π √(1 − r²)), integrated in t with r = sin t to remove the
/// endpoint singularity: w(r) dr = (4/π) sin²t dt.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bures;

impl Bures {
    /// Unnormalized prior mass on [r_min, r_max].
    pub fn mass(r_min: f64, r_max: f64) -> f64 {
        let f = |t: f64| (2.0 / PI) * (t - t.sin() * t.cos());
        f(r_max.asin()) - f(r_min.asin())
    }
}

impl RadialPrior for Bures {
    fn name(&self) -> &'static str {
        "bures"
    }

    fn nodes(&self, r_min: f64, r_max: f64, n: usize) -> Result<Vec<(f64, f64)>> {
        if r_min == r_max {
            return Ok(vec![(r_min, 1.0)]);
        }
        let (t0, t1) = (r_min.asin(), r_max.asin());
        let (x, w) = gauss_legendre(n);
        let half = 0.5 * (t1 - t0);
        let mut nodes: Vec<(f64, f64)> = x
            .iter()
            .zip(&w)
            .map(|(&xi, &wi)| {
                let t = t0 + half * (xi + 1.0);
                (t.sin(), wi * half * 4.0 / PI * t.sin().powi(2))
            })
            .collect();
        let total: f64 = nodes.iter().map(|n| n.1).sum();
        if !(total > 0.0) {
            return Err(Error::EmptyInterval(r_min, r_max));
        }
        nodes.iter_mut().for_each(|n| n.1 /= total);
        Ok(nodes)
    }
}

/// All mass at a single radius; requires r_min = r_max.
#[derive(Debug, Clone, Copy, Default)]
pub struct PointPrior;

impl RadialPrior for PointPrior {
    fn name(&self) -> &'static str {
        "point"
    }

    fn nodes(&self, r_min: f64, r_max: f64, _n: usize) -> Result<Vec<(f64, f64)>> {
        if r_min != r_max {
            return Err(Error::InvalidState(format!("point prior needs r_min = r_max, got [{r_min}, {r_max}]")));
        }
        Ok(vec![(r_min, 1.0)])
    }
}

/// Measurement strategy of the classical adversary.
pub trait BoundStrategy: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;
    fn fidelity(&self, radial: &[(f64, f64)], angular_nodes: usize) -> f64;
}

fn norm4(v: &[f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Two-outcome projective measurement along z; the azimuth integrates out.
#[derive(Debug, Clone, Copy, Default)]
pub struct Projective;

impl BoundStrategy for Projective {
    fn name(&self) -> &'static str {
        "projective"
    }

    fn fidelity(&self, radial: &[(f64, f64)], angular_nodes: usize) -> f64 {
        let (us, wus) = gauss_legendre(angular_nodes.max(2));
        let mut total = 0.0;
        for eps in [1.0, -1.0] {
            let mut v = [0.0; 4];
            for &(r, wr) in radial {
                for (&u, &wu) in us.iter().zip(&wus) {
                    let p = 0.5 * (1.0 + eps * r * u);
                    let w = wr * 0.5 * wu * p;
                    v[0] += w * (1.0 - r * r).max(0.0).sqrt();
                    v[3] += w * r * u;
                }
            }
            total += norm4(&v);
        }
        0.5 * (1.0 + total)
    }
}

/// Numerical check of the projective choice: unsharp two-outcome POVMs
/// (1 ± s n·σ)/2 along a tilted axis n, scanned over the sharpness s, with
/// full quadrature over both sphere angles.
#[derive(Debug, Clone, Copy)]
pub struct PovmScan {
    pub sharpness_steps: usize,
    pub axis: [f64; 3],
}

impl Default for PovmScan {
    fn default() -> Self {
        let (th, ph) = (0.7f64, 0.3f64);
        Self { sharpness_steps: 21, axis: [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()] }
    }
}

impl PovmScan {
    fn fidelity_at(&self, s: f64, radial: &[(f64, f64)], angular_nodes: usize) -> f64 {
        let (us, wus) = gauss_legendre(angular_nodes.max(2));
        let n_phi = 2 * angular_nodes.max(2);
        let n = self.axis;
        let mut total = 0.0;
        for eps in [1.0, -1.0] {
            let mut v = [0.0; 4];
            for &(r, wr) in radial {
                let r0 = (1.0 - r * r).max(0.0).sqrt();
                for (&u, &wu) in us.iter().zip(&wus) {
                    let st = (1.0 - u * u).sqrt();
                    for k in 0..n_phi {
                        let phi = 2.0 * PI * k as f64 / n_phi as f64;
                        let dir = [st * phi.cos(), st * phi.sin(), u];
                        let dot = dir[0] * n[0] + dir[1] * n[1] + dir[2] * n[2];
                        let p = 0.5 * (1.0 + eps * s * r * dot);
                        let w = wr * 0.5 * wu / n_phi as f64 * p;
                        v[0] += w * r0;
                        for i in 0..3 {
                            v[i + 1] += w * r * dir[i];
                        }
                    }
                }
            }
            total += norm4(&v);
        }
        0.5 * (1.0 + total)
    }
}

impl BoundStrategy for PovmScan {
    fn name(&self) -> &'static str {
        "povm-scan"
    }

    fn fidelity(&self, radial: &[(f64, f64)], angular_nodes: usize) -> f64 {
        let steps = self.sharpness_steps.max(2);
        (0..steps)
            .map(|k| self.fidelity_at(k as f64 / (steps - 1) as f64, radial, angular_nodes))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

type PriorCtor = fn() -> Arc<dyn RadialPrior>;
type StrategyCtor = fn() -> Arc<dyn BoundStrategy>;

const PRIORS: &[(&str, PriorCtor)] =
    &[("bures", || Arc::new(Bures)), ("point", || Arc::new(PointPrior))];

const STRATEGIES: &[(&str, StrategyCtor)] = &[
    ("projective", || Arc::new(Projective)),
    ("povm-scan", || Arc::new(PovmScan::default())),
];

pub fn radial_prior_names() -> Vec<&'static str> {
    PRIORS.iter().map(|(n, _)| *n).collect()
}

pub fn radial_prior(name: &str) -> Result<Arc<dyn RadialPrior>> {
    PRIORS.iter().find(|(n, _)| *n == name).map(|(_, f)| f()).ok_or_else(|| Error::UnknownName {
        kind: "radial prior",
        name: name.into(),
        available: radial_prior_names().join(", "),
    })
}

pub fn bound_strategy_names() -> Vec<&'static str> {
    STRATEGIES.iter().map(|(n, _)| *n).collect()
}

pub fn bound_strategy(name: &str) -> Result<Arc<dyn BoundStrategy>> {
    STRATEGIES.iter().find(|(n, _)| *n == name).map(|(_, f)| f()).ok_or_else(|| Error::UnknownName {
        kind: "bound strategy",
        name: name.into(),
        available: bound_strategy_names().join(", "),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub prior: String,
    pub strategy: String,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for BoundSpec {
    fn default() -> Self {
        Self {
            r_min: 0.41,
            r_max: 1.0,
            prior: "bures".into(),
            strategy: "projective".into(),
            radial_nodes: 64,
            angular_nodes: 16,
        }
    }
}

impl BoundSpec {
    pub fn point(r: f64) -> Self {
        Self { r_min: r, r_max: r, prior: "point".into(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("r_min", self.r_min)?;
        check_unit("r_max", self.r_max)?;
        if self.r_min > self.r_max {
            return Err(Error::EmptyInterval(self.r_min, self.r_max));
        }
        if self.radial_nodes == 0 || self.angular_nodes == 0 {
            return Err(Error::Format("integration node counts must be positive".into()));
        }
        Ok(())
    }
}

/// Classical fidelity threshold for mixed inputs drawn from the prior.
pub fn classical_bound_mixed(spec: &BoundSpec) -> Result<f64> {
    spec.validate()?;
    let prior = radial_prior(&spec.prior)?;
    let strategy = bound_strategy(&spec.strategy)?;
    let nodes = prior.nodes(spec.r_min, spec.r_max, spec.radial_nodes)?;
    Ok(strategy.fidelity(&nodes, spec.angular_nodes))
}

/// Non-postselected bound for qubits carrying a single photon with
/// probability η: F_η = 1 − η/3.
pub fn dual_rail_bound(eta: f64) -> Result<f64> {
    check_unit("eta", eta)?;
    Ok(1.0 - eta / 3.0)
}
