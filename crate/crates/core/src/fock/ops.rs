//! Index arithmetic for operators acting on a subset of modes.

use super::layout::{ModeLayout, Split};
use super::linalg::CMat;

/// `m · (op ⊗ 1_rest)` where `op` acts on `selected` (in that order).
#[allow(dead_code)]
pub(crate) fn right_mul(m: &CMat, layout: &ModeLayout, selected: &[usize], op: &CMat) -> CMat {
    let split = Split::new(layout, selected);
    right_mul_split(m, &split, op)
}

pub(crate) fn right_mul_split(m: &CMat, split: &Split, op: &CMat) -> CMat {
    let n = m.ncols();
    let mut out = CMat::zeros(m.nrows(), n);
    for k in 0..n {
        let (rest, local) = split.parts[k];
        let mut col = out.column_mut(k);
        for s in 0..split.local_dim {
            let w = op[(s, local)];
            if w.re == 0.0 && w.im == 0.0 {
                continue;
            }
            let j = split.compose[rest * split.local_dim + s];
            col.axpy(w, &m.column(j), num_complex::Complex64::new(1.0, 0.0));
        }
    }
    out
}

/// `(op ⊗ 1_rest) · m`
#[allow(dead_code)]
pub(crate) fn left_mul(m: &CMat, layout: &ModeLayout, selected: &[usize], op: &CMat) -> CMat {
    let split = Split::new(layout, selected);
    right_mul_split(&m.adjoint(), &split, &op.adjoint()).adjoint()
}

/// `(op ⊗ 1) m (op ⊗ 1)†`
pub(crate) fn conjugate(m: &CMat, layout: &ModeLayout, selected: &[usize], op: &CMat) -> CMat {
    let split = Split::new(layout, selected);
    let half = right_mul_split(m, &split, &op.adjoint());
    right_mul_split(&half.adjoint(), &split, &op.adjoint()).adjoint()
}

/// Σ_k K_k m K_k† for Kraus operators on one mode.
pub(crate) fn kraus(m: &CMat, layout: &ModeLayout, mode: usize, ops: &[CMat]) -> CMat {
    let split = Split::new(layout, &[mode]);
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for op in ops {
        let half = right_mul_split(m, &split, &op.adjoint());
        out += right_mul_split(&half.adjoint(), &split, &op.adjoint()).adjoint();
    }
    out
}

pub(crate) fn partial_trace(m: &CMat, layout: &ModeLayout, mode: usize) -> CMat {
    let split = Split::new(layout, &[mode]);
    let d = split.local_dim;
    let mut out = CMat::zeros(split.rest_dim, split.rest_dim);
    for c in 0..split.rest_dim {
        for r in 0..split.rest_dim {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for s in 0..d {
                acc += m[(split.compose[r * d + s], split.compose[c * d + s])];
            }
            out[(r, c)] = acc;
        }
    }
    out
}

/// Tr_mode[(op ⊗ 1) m] without forming the intermediate product.
pub(crate) fn measure_and_trace(m: &CMat, layout: &ModeLayout, mode: usize, op: &CMat) -> CMat {
    let split = Split::new(layout, &[mode]);
    let d = split.local_dim;
    let mut out = CMat::zeros(split.rest_dim, split.rest_dim);
    for c in 0..split.rest_dim {
        for r in 0..split.rest_dim {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for s in 0..d {
                for t in 0..d {
                    let w = op[(t, s)];
                    if w.re == 0.0 && w.im == 0.0 {
                        continue;
                    }
                    acc += w * m[(split.compose[r * d + s], split.compose[c * d + t])];
                }
            }
            out[(r, c)] = acc;
        }
    }
    out
}
