//! Structured-text and CSV forms of states, process matrices, frequency
//! tables, sweeps and quadrature samples. Complex entries are `[re, im]`.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::linalg::{c, CMat};
use crate::fock::{DensityMatrix, ModeLayout};
use crate::tomography::{FrequencyTable, LabeledOperator, QuadratureSample};

pub type ComplexRows = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_rows(m: &CMat) -> ComplexRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn rows_to_matrix(rows: &ComplexRows) -> Result<CMat> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Format("ragged matrix rows".into()));
    }
    Ok(CMat::from_fn(n, m, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    modes: ModeLayout,
    normalized: bool,
    /// Row-major, flat index ordering of `modes`.
    rho: ComplexRows,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr { modes: self.layout().clone(), normalized: self.is_normalized(), rho: matrix_to_rows(self.data()) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = StateRepr::deserialize(d)?;
        let m = rows_to_matrix(&r.rho).map_err(serde::de::Error::custom)?;
        DensityMatrix::new(r.modes, m, r.normalized).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct LabeledRepr {
    label: String,
    matrix: ComplexRows,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    input: String,
    effect: String,
    frequency: f64,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    inputs: Vec<LabeledRepr>,
    effects: Vec<LabeledRepr>,
    frequencies: Vec<Entry>,
}

impl Serialize for FrequencyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let lab = |v: &[LabeledOperator]| {
            v.iter().map(|o| LabeledRepr { label: o.label.clone(), matrix: matrix_to_rows(&o.op) }).collect()
        };
        let mut frequencies = Vec::new();
        for (i, row) in self.inputs().iter().zip(self.values()) {
            for (e, &v) in self.effects().iter().zip(row) {
                frequencies.push(Entry { input: i.label.clone(), effect: e.label.clone(), frequency: v });
            }
        }
        TableRepr { inputs: lab(self.inputs()), effects: lab(self.effects()), frequencies }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrequencyTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = TableRepr::deserialize(d)?;
        let unlab = |v: Vec<LabeledRepr>| -> Result<Vec<LabeledOperator>> {
            v.into_iter().map(|l| Ok(LabeledOperator { label: l.label, op: rows_to_matrix(&l.matrix)? })).collect()
        };
        let inputs = unlab(r.inputs).map_err(D::Error::custom)?;
        let effects = unlab(r.effects).map_err(D::Error::custom)?;
        let mut values = vec![vec![f64::NAN; effects.len()]; inputs.len()];
        for e in r.frequencies {
            let j = inputs.iter().position(|o| o.label == e.input);
            let l = effects.iter().position(|o| o.label == e.effect);
            match (j, l) {
                (Some(j), Some(l)) => values[j][l] = e.frequency,
                _ => return Err(D::Error::custom(format!("unknown label pair ({}, {})", e.input, e.effect))),
            }
        }
        if values.iter().flatten().any(|v| v.is_nan()) {
            return Err(D::Error::custom("frequency table is incomplete"));
        }
        FrequencyTable::new(inputs, effects, values).map_err(D::Error::custom)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// Write records as CSV with a header row taken from the field names.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}

pub fn read_csv<T: DeserializeOwned, R: Read>(input: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Format(e.to_string())))
        .collect()
}

pub fn read_samples_csv<R: Read>(input: R) -> Result<Vec<QuadratureSample>> {
    read_csv(input)
}
