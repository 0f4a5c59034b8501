use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Generalized Laguerre L_n^{(k)}(x) by upward recurrence.
pub fn laguerre(n: usize, k: usize, x: f64) -> f64 {
    let kf = k as f64;
    let (mut l0, mut l1) = (1.0, 1.0 + kf - x);
    if n == 0 {
        return l0;
    }
    for j in 1..n {
        let jf = j as f64;
        let l2 = ((2.0 * jf + 1.0 + kf - x) * l1 - (jf + kf) * l0) / (jf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Wigner function normalized to ∫∫ W dx dp = 1 (vacuum W(0,0) = 1/π),
/// x = (a + a†)/√2.
pub fn wigner(rho: &DensityMatrix, grid: &[(f64, f64)]) -> Result<Vec<f64>> {
    if rho.layout().len() != 1 {
        return Err(Error::InvalidState("Wigner function needs a single-mode state".into()));
    }
    let dim = rho.dim();
    let tr = rho.trace();
    // √(n!/m!) for n ≤ m, as a table indexed [n][m]
    let mut ratio = vec![vec![0.0; dim]; dim];
    for (n, row) in ratio.iter_mut().enumerate() {
        let mut r = 1.0;
        for (m, slot) in row.iter_mut().enumerate().skip(n) {
            if m > n {
                r /= (m as f64).sqrt();
            }
            *slot = r;
        }
    }
    Ok(grid
        .iter()
        .map(|&(x, p)| {
            let r2 = x * x + p * p;
            let z = C64::new(2f64.sqrt() * x, -(2f64.sqrt()) * p);
            let gauss = (-r2).exp() / PI;
            let mut acc = 0.0;
            for (n, row) in ratio.iter().enumerate() {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let mut zpow = C64::new(1.0, 0.0);
                for (m, &ratio_nm) in row.iter().enumerate().skip(n) {
                    let w = zpow * (sign * ratio_nm * laguerre(n, m - n, 2.0 * r2));
                    let rho_mn = rho.element(m, n);
                    if m == n {
                        acc += (rho_mn * w).re;
                    } else {
                        acc += 2.0 * (rho_mn * w).re;
                    }
                    zpow *= z;
                }
            }
            acc * gauss / tr
        })
        .collect())
}
