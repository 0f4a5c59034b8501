use super::linalg::{c, CMat};
use super::state::DensityMatrix;
use crate::error::{check_unit, Result};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Kraus operators of the pure-loss channel with transmission `eta`:
/// E_k = Σ_n √(C(n,k) η^{n−k} (1−η)^k) |n−k⟩⟨n|.
///
/// This is the beamsplitter-with-vacuum-ancilla map with the ancilla traced out.
pub fn loss_kraus(dim: usize, eta: f64) -> Result<Vec<CMat>> {
    check_unit("eta", eta)?;
    Ok((0..dim)
        .map(|k| {
            let mut e = CMat::zeros(dim, dim);
            for n in k..dim {
                let w = binomial(n, k) * eta.powi((n - k) as i32) * (1.0 - eta).powi(k as i32);
                e[(n - k, n)] = c(w.sqrt(), 0.0);
            }
            e
        })
        .collect())
}

pub fn loss_channel(rho: &DensityMatrix, mode: &str, eta: f64) -> Result<DensityMatrix> {
    let dim = rho.layout().dim_of(mode)?;
    rho.apply_kraus(mode, &loss_kraus(dim, eta)?)
}

/// Heisenberg-picture loss: Σ_k E_k† X E_k.
pub fn loss_adjoint(op: &CMat, eta: f64) -> Result<CMat> {
    let kraus = loss_kraus(op.nrows(), eta)?;
    Ok(kraus.iter().map(|e| e.adjoint() * op * e).fold(CMat::zeros(op.nrows(), op.ncols()), |a, b| a + b))
}
