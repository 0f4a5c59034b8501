use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate mode name `{0}`")]
    DuplicateMode(String),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("invalid mode dimension {0} (must be >= 1)")]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("negative eigenvalue {0:e} below clamping threshold")]
    NegativeEigenvalue(f64),
    #[error("state requires {0}")]
    NotNormalized(&'static str),
    #[error("truncation too small: tail mass {tail:e} exceeds {limit:e}")]
    Truncation { tail: f64, limit: f64 },
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),
    #[error("conditioning removed all probability mass")]
    ZeroProbability,
    #[error("logical subspace weight {0:e} too small")]
    SubspaceWeight(f64),
    #[error("empty radial interval [{0}, {1}]")]
    EmptyInterval(f64, f64),
    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownName { kind: &'static str, name: String, available: String },
    #[error("rank-deficient {0} set")]
    RankDeficient(&'static str),
    #[error("no physical mixture in the scanned range")]
    NoPhysicalMixture,
    #[error("solver did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value })
    }
}
