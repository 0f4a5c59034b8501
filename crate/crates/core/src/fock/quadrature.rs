//! Hermite functions, Gauss–Legendre integration and homodyne window operators.
//!
//! Internal quadrature convention: x = (a + a†)/√2, vacuum variance 1/2.
//! Window widths are given in units of the vacuum standard deviation σ0.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::linalg::{c, CMat};
use super::state::Operator;
use crate::error::{Error, Result};

/// σ0 in internal units.
pub const SIGMA0: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConvention {
    pub sigma0: f64,
}

impl Default for QuadratureConvention {
    fn default() -> Self {
        Self { sigma0: SIGMA0 }
    }
}

impl QuadratureConvention {
    pub fn to_internal(&self, sigma0_units: f64) -> f64 {
        sigma0_units * self.sigma0
    }

    pub fn to_sigma0(&self, internal: f64) -> f64 {
        internal / self.sigma0
    }
}

/// Homodyne conditioning window: full width in σ0 units, or none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    None,
    Width(f64),
}

impl Serialize for Window {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Window::None => s.serialize_str("none"),
            Window::Width(w) => s.serialize_f64(*w),
        }
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(w) => Ok(Window::Width(w)),
            Raw::Text(t) => Window::parse(&t).map_err(serde::de::Error::custom),
        }
    }
}

impl Window {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("none") || t == "inf" || t == "∞" {
            return Ok(Window::None);
        }
        t.parse::<f64>()
            .map(Window::Width)
            .map_err(|_| Error::Format(format!("bad window width `{s}`")))
    }

    pub fn label(&self) -> String {
        match self {
            Window::None => "none".into(),
            Window::Width(w) => format!("{w}"),
        }
    }
}

/// ψ_0 … ψ_{n−1} at x (stable three-term recurrence).
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    out[0] = PI.powf(-0.25) * (-x * x / 2.0).exp();
    if n > 1 {
        out[1] = 2f64.sqrt() * x * out[0];
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
    out
}

/// Gauss–Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pnm1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

const GL_ORDER: usize = 24;

/// Adaptive Gauss–Legendre integration of a vector-valued integrand;
/// bisects until the two-panel estimate agrees with the one-panel estimate
/// to `tol` in max-norm.
pub fn integrate_vec(f: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64, tol: f64) -> Vec<f64> {
    let rule = gauss_legendre(GL_ORDER);
    let panel = |lo: f64, hi: f64| -> Vec<f64> {
        let half = (hi - lo) / 2.0;
        let mid = (hi + lo) / 2.0;
        let mut acc: Vec<f64> = Vec::new();
        for (x, w) in rule.0.iter().zip(&rule.1) {
            let v = f(mid + half * x);
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (a, vi) in acc.iter_mut().zip(v) {
                *a += w * half * vi;
            }
        }
        acc
    };
    fn recurse(
        panel: &dyn Fn(f64, f64) -> Vec<f64>,
        lo: f64,
        hi: f64,
        whole: Vec<f64>,
        tol: f64,
        depth: usize,
    ) -> Vec<f64> {
        let mid = (lo + hi) / 2.0;
        let left = panel(lo, mid);
        let right = panel(mid, hi);
        let err = whole
            .iter()
            .zip(left.iter().zip(&right))
            .map(|(w, (l, r))| (w - l - r).abs())
            .fold(0.0, f64::max);
        if err <= tol || depth >= 30 {
            return left.iter().zip(&right).map(|(l, r)| l + r).collect();
        }
        let mut l = recurse(panel, lo, mid, left, tol / 2.0, depth + 1);
        let r = recurse(panel, mid, hi, right, tol / 2.0, depth + 1);
        for (a, b) in l.iter_mut().zip(r) {
            *a += b;
        }
        l
    }
    let whole = panel(a, b);
    recurse(&panel, a, b, whole, tol, 0)
}

/// Absolute tolerance for window-operator matrix elements.
pub const WINDOW_TOL: f64 = 1e-10;

/// ∫_lo^hi ψ_m(x) ψ_n(x) dx for an interval in internal units.
pub fn interval_overlaps(dim: usize, lo: f64, hi: f64) -> CMat {
    let f = |x: f64| {
        let psi = hermite_functions(dim, x);
        let mut out = Vec::with_capacity(dim * (dim + 1) / 2);
        for m in 0..dim {
            for n in m..dim {
                out.push(psi[m] * psi[n]);
            }
        }
        out
    };
    let vals = integrate_vec(&f, lo, hi, WINDOW_TOL);
    let mut a = CMat::zeros(dim, dim);
    let mut k = 0;
    for m in 0..dim {
        for n in m..dim {
            a[(m, n)] = c(vals[k], 0.0);
            a[(n, m)] = c(vals[k], 0.0);
            k += 1;
        }
    }
    a
}

/// Rotate an x-quadrature operator to LO phase θ: A_θ = R A R†, R = e^{iθn}.
pub fn rotate_to_phase(a: &CMat, theta: f64) -> CMat {
    if theta == 0.0 {
        return a.clone();
    }
    CMat::from_fn(a.nrows(), a.ncols(), |m, n| {
        a[(m, n)] * num_complex::Complex64::from_polar(1.0, (m as f64 - n as f64) * theta)
    })
}

/// Projector onto quadrature values q_θ ∈ [−Δ/2, Δ/2] (Δ in σ0 units).
pub fn quadrature_window_operator(dim: usize, window: Window, lo_phase: f64) -> Result<Operator> {
    match window {
        Window::None => Ok(Operator::identity(dim)),
        Window::Width(w) if !(w > 0.0) => Err(Error::OutOfRange { name: "window width", value: w }),
        Window::Width(w) if w.is_infinite() => Ok(Operator::identity(dim)),
        Window::Width(w) => {
            let half = QuadratureConvention::default().to_internal(w) / 2.0;
            let a = interval_overlaps(dim, -half, half);
            Ok(Operator::single(rotate_to_phase(&a, lo_phase)))
        }
    }
}
