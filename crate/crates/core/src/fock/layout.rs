use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mode {
    pub name: String,
    pub dim: usize,
}

/// Ordered list of named modes. Flat indices are row-major: the first mode
/// is the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Mode>", into = "Vec<Mode>")]
pub struct ModeLayout {
    modes: Vec<Mode>,
}

impl ModeLayout {
    pub fn new<S: Into<String>>(modes: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let modes = modes
            .into_iter()
            .map(|(name, dim)| Mode { name: name.into(), dim })
            .collect::<Vec<_>>();
        Self::try_from(modes)
    }

    pub fn single(name: &str, dim: usize) -> Result<Self> {
        Self::new([(name, dim)])
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modes.iter().map(|m| m.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.modes.iter().map(|m| m.dim).product()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| Error::UnknownMode(name.to_string()))
    }

    pub fn dim_of(&self, name: &str) -> Result<usize> {
        Ok(self.modes[self.index_of(name)?].dim)
    }

    pub fn unflatten(&self, mut k: usize) -> Vec<usize> {
        let mut out = vec![0; self.modes.len()];
        for (slot, mode) in out.iter_mut().zip(&self.modes).rev() {
            *slot = k % mode.dim;
            k /= mode.dim;
        }
        out
    }

    pub fn flatten(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.modes)
            .fold(0, |acc, (&d, m)| acc * m.dim + d)
    }

    /// Concatenate two layouts; fails on shared names.
    pub fn concat(&self, other: &ModeLayout) -> Result<ModeLayout> {
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        ModeLayout::try_from(modes)
    }

    pub fn without(&self, index: usize) -> ModeLayout {
        let mut modes = self.modes.clone();
        modes.remove(index);
        ModeLayout { modes }
    }

    pub fn with_dim(&self, index: usize, dim: usize) -> Result<ModeLayout> {
        let mut modes = self.modes.clone();
        modes[index].dim = dim;
        ModeLayout::try_from(modes)
    }
}

impl TryFrom<Vec<Mode>> for ModeLayout {
    type Error = Error;

    fn try_from(modes: Vec<Mode>) -> Result<Self> {
        for (i, m) in modes.iter().enumerate() {
            if m.dim == 0 {
                return Err(Error::InvalidDimension(m.dim));
            }
            if modes[..i].iter().any(|o| o.name == m.name) {
                return Err(Error::DuplicateMode(m.name.clone()));
            }
        }
        Ok(Self { modes })
    }
}

impl From<ModeLayout> for Vec<Mode> {
    fn from(layout: ModeLayout) -> Self {
        layout.modes
    }
}

/// Splits flat indices of a layout into (rest, local) parts for a chosen
/// ordered subset of modes.
#[derive(Debug, Clone)]
pub(crate) struct Split {
    pub local_dim: usize,
    pub rest_dim: usize,
    /// flat index -> (rest index, local index)
    pub parts: Vec<(usize, usize)>,
    /// rest * local_dim + local -> flat index
    pub compose: Vec<usize>,
}

impl Split {
    pub fn new(layout: &ModeLayout, selected: &[usize]) -> Self {
        let dims = layout.dims();
        let local_dim: usize = selected.iter().map(|&i| dims[i]).product();
        let total = layout.total_dim();
        let rest_dim = total / local_dim;
        let mut parts = Vec::with_capacity(total);
        let mut compose = vec![0; total];
        for k in 0..total {
            let digits = layout.unflatten(k);
            let local = selected.iter().fold(0, |acc, &i| acc * dims[i] + digits[i]);
            let rest = digits
                .iter()
                .enumerate()
                .filter(|(i, _)| !selected.contains(i))
                .fold(0, |acc, (i, &d)| acc * dims[i] + d);
            parts.push((rest, local));
            compose[rest * local_dim + local] = k;
        }
        Self { local_dim, rest_dim, parts, compose }
    }
}
