//! Seeded random states and matrices for property checks and synthetic data.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::layout::ModeLayout;
use super::linalg::{c, CMat, CVec};
use super::state::DensityMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` child seeds drawn in order from one master generator.
pub fn split_seeds(master: u64, n: usize) -> Vec<u64> {
    let mut r = rng(master);
    (0..n).map(|_| r.next_u64()).collect()
}

pub fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn random_ket(dim: usize, seed: u64) -> CVec {
    let mut r = rng(seed);
    let v = ginibre(&mut r, dim, 1).column(0).into_owned();
    let n = v.norm();
    v.unscale(n)
}

/// Full-rank random mixed state (Ginibre ensemble).
pub fn random_density(name: &str, dim: usize, seed: u64) -> DensityMatrix {
    let mut r = rng(seed);
    let g = ginibre(&mut r, dim, dim);
    let m = &g * g.adjoint();
    let t = m.trace().re;
    DensityMatrix::new(ModeLayout::single(name, dim).unwrap(), m.unscale(t), true).unwrap()
}

/// Random state supported on the first `support` Fock levels of a `dim`-level mode.
pub fn random_density_in(name: &str, dim: usize, support: usize, seed: u64) -> DensityMatrix {
    let small = random_density(name, support, seed);
    let mut m = CMat::zeros(dim, dim);
    m.view_mut((0, 0), (support, support)).copy_from(small.data());
    DensityMatrix::new(ModeLayout::single(name, dim).unwrap(), m, true).unwrap()
}

pub fn random_density_on(layout: &ModeLayout, seed: u64) -> DensityMatrix {
    let n = layout.total_dim();
    let mut r = rng(seed);
    let g = ginibre(&mut r, n, n);
    let m = &g * g.adjoint();
    let t = m.trace().re;
    DensityMatrix::new(layout.clone(), m.unscale(t), true).unwrap()
}
