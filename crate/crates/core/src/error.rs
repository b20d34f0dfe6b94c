use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has a zero dimension")]
    EmptyMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("eigensolver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("trace {trace} differs from 1")]
    NotUnitTrace { trace: f64 },
    #[error("dimension {dim} is not a power of two")]
    NotQubitSystem { dim: usize },
    #[error("POVM elements do not resolve the identity (deviation {deviation:e})")]
    NotComplete { deviation: f64 },
    #[error("distribution sums to {sum}")]
    NotNormalized { sum: f64 },
    #[error("K = {k} classes cannot be formed from {dim} basis states")]
    InvalidK { k: usize, dim: usize },
    #[error("eta = {0} outside [0, 1]")]
    EtaOutOfRange(f64),
    #[error("parameter {name} = {value} out of range")]
    ParamOutOfRange { name: &'static str, value: f64 },
    #[error("alpha = {0} must be at least 1")]
    AlphaOutOfRange(f64),
    #[error("target qubit {target} out of range for {qubits} qubits")]
    BadTarget { target: usize, qubits: usize },
    #[error("class index {index} out of range for {len} scores")]
    BadIndex { index: usize, len: usize },
    #[error("encoding scheme does not match the requested operation")]
    WrongScheme,
    #[error("threshold undefined: denominator {denominator} is not positive")]
    Undefined { denominator: f64 },
    #[error("target delta {delta} is not reachable for sigma in [{lo}, {hi}]")]
    NoBracket { delta: f64, lo: f64, hi: f64 },
    #[error("relaxed delta {delta} is outside (0, 1)")]
    Infeasible { delta: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::EtaOutOfRange(eta))
    }
}

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange { name, value })
    }
}
