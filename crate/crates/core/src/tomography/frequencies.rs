use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::process::ProcessMatrix;
use crate::converter::{convert_qubit, project_logical, LogicalBasis, ProtocolParams};
use crate::error::{Error, Result};
use crate::fock::linalg::{c, eigvalsh, trace, CMat};
use crate::sources::{HybridSpec, QubitSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledOperator {
    pub label: String,
    pub op: CMat,
}

/// Probe states for process tomography.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputSet {
    /// {|0⟩, |1⟩, |+⟩, |+i⟩}
    #[default]
    Four,
    /// The four above plus {|−⟩, |−i⟩}.
    Six,
}

fn input_specs(set: InputSet) -> Vec<(&'static str, QubitSpec)> {
    let s = FRAC_1_SQRT_2;
    let mut v = vec![("0", (1.0, 0.0)), ("1", (0.0, 0.0)), ("+", (s, 0.0)), ("+i", (s, FRAC_PI_2))];
    if set == InputSet::Six {
        v.extend([("-", (s, PI)), ("-i", (s, -FRAC_PI_2))]);
    }
    v.into_iter()
        .map(|(l, (c0, th))| (l, QubitSpec::new(c0, th).expect("valid probe state")))
        .collect()
}

pub fn standard_inputs(set: InputSet) -> Vec<LabeledOperator> {
    input_specs(set)
        .into_iter()
        .map(|(l, q)| LabeledOperator { label: l.into(), op: q.logical() })
        .collect()
}

/// Eigenprojectors of σz, σx, σy.
pub fn pauli_effects() -> Vec<LabeledOperator> {
    let s = FRAC_1_SQRT_2;
    let kets = [
        ("z+", c(1.0, 0.0), c(0.0, 0.0)),
        ("z-", c(0.0, 0.0), c(1.0, 0.0)),
        ("x+", c(s, 0.0), c(s, 0.0)),
        ("x-", c(s, 0.0), c(-s, 0.0)),
        ("y+", c(s, 0.0), c(0.0, s)),
        ("y-", c(s, 0.0), c(0.0, -s)),
    ];
    kets.into_iter()
        .map(|(l, a, b)| {
            let v = nalgebra::DVector::from_vec(vec![a, b]);
            LabeledOperator { label: l.into(), op: &v * v.adjoint() }
        })
        .collect()
}

/// Outcome frequencies f_jl for input ρ_j and effect E_l.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    inputs: Vec<LabeledOperator>,
    effects: Vec<LabeledOperator>,
    values: Vec<Vec<f64>>,
}

const RANK_TOL: f64 = 1e-10;
const FREQ_TOL: f64 = 1e-9;

fn check_spanning(set: &[LabeledOperator], what: &'static str) -> Result<()> {
    if set.iter().any(|o| o.op.shape() != (2, 2)) {
        return Err(Error::DimensionMismatch { expected: 2, found: set.iter().map(|o| o.op.nrows()).find(|&n| n != 2).unwrap_or(0) });
    }
    let gram = CMat::from_fn(set.len(), set.len(), |i, j| trace(&(set[i].op.adjoint() * &set[j].op)));
    let ev = eigvalsh(&gram);
    let top = ev.iter().cloned().fold(0.0, f64::max);
    let rank = ev.iter().filter(|&&e| e > RANK_TOL * top.max(1e-300)).count();
    if rank < 4 {
        return Err(Error::RankDeficient(what));
    }
    Ok(())
}

impl FrequencyTable {
    pub fn new(inputs: Vec<LabeledOperator>, effects: Vec<LabeledOperator>, values: Vec<Vec<f64>>) -> Result<Self> {
        check_spanning(&inputs, "input states")?;
        check_spanning(&effects, "measurement effects")?;
        if values.len() != inputs.len() {
            return Err(Error::DimensionMismatch { expected: inputs.len(), found: values.len() });
        }
        for row in &values {
            if row.len() != effects.len() {
                return Err(Error::DimensionMismatch { expected: effects.len(), found: row.len() });
            }
            if let Some(&v) = row.iter().find(|v| !(**v >= -FREQ_TOL && **v <= 1.0 + FREQ_TOL)) {
                return Err(Error::OutOfRange { name: "frequency", value: v });
            }
        }
        Ok(Self { inputs, effects, values })
    }

    /// Noise-free frequencies Tr(ε(ρ_j) E_l) of a known process.
    pub fn exact(chi: &ProcessMatrix, inputs: Vec<LabeledOperator>, effects: Vec<LabeledOperator>) -> Result<Self> {
        let values = inputs
            .iter()
            .map(|i| {
                let out = chi.apply(&i.op)?;
                Ok(effects.iter().map(|e| trace(&(&out * &e.op)).re).collect())
            })
            .collect::<Result<_>>()?;
        Self::new(inputs, effects, values)
    }

    pub fn inputs(&self) -> &[LabeledOperator] {
        &self.inputs
    }

    pub fn effects(&self) -> &[LabeledOperator] {
        &self.effects
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, input: &str, effect: &str) -> Option<f64> {
        let j = self.inputs.iter().position(|o| o.label == input)?;
        let l = self.effects.iter().position(|o| o.label == effect)?;
        Some(self.values[j][l])
    }
}

/// Frequencies of the simulated converter acting on logical probe states.
///
/// Each output is projected onto the target basis without renormalizing;
/// probabilities are divided by the largest per-input success so that the
/// conditional, trace-decreasing character of the map is kept.
pub fn pipeline_frequency_table(
    params: &ProtocolParams,
    hybrid: &HybridSpec,
    set: InputSet,
    target: LogicalBasis,
) -> Result<FrequencyTable> {
    let specs = input_specs(set);
    let outputs = specs
        .par_iter()
        .map(|(_, q)| {
            let res = convert_qubit(q, hybrid, params)?;
            let p = project_logical(&res.output, target)?;
            Ok(p.rho.scale(p.weight * res.success_prob))
        })
        .collect::<Result<Vec<CMat>>>()?;
    let top = outputs.iter().map(|o| trace(o).re).fold(0.0, f64::max);
    if !(top > 0.0) {
        return Err(Error::ZeroProbability);
    }
    let effects = pauli_effects();
    let values = outputs
        .iter()
        .map(|o| effects.iter().map(|e| trace(&(o * &e.op)).re / top).collect())
        .collect();
    let inputs = specs
        .into_iter()
        .map(|(l, q)| LabeledOperator { label: l.into(), op: q.logical() })
        .collect();
    FrequencyTable::new(inputs, effects, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_span_operator_space() {
        check_spanning(&standard_inputs(InputSet::Four), "inputs").unwrap();
        check_spanning(&standard_inputs(InputSet::Six), "inputs").unwrap();
        check_spanning(&pauli_effects(), "effects").unwrap();
        let three = standard_inputs(InputSet::Four).into_iter().take(3).collect::<Vec<_>>();
        assert!(matches!(check_spanning(&three, "inputs"), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn identity_frequencies() {
        let t = FrequencyTable::exact(&ProcessMatrix::identity(), standard_inputs(InputSet::Four), pauli_effects()).unwrap();
        assert!((t.get("0", "z+").unwrap() - 1.0).abs() < 1e-15);
        assert!((t.get("+", "x+").unwrap() - 1.0).abs() < 1e-15);
        assert!((t.get("+i", "y+").unwrap() - 1.0).abs() < 1e-15);
        assert!((t.get("+i", "x+").unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = vec![vec![1.5; 6]; 4];
        assert!(FrequencyTable::new(standard_inputs(InputSet::Four), pauli_effects(), bad).is_err());
    }
}
