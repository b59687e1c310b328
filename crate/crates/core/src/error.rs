use thiserror::Error;

/// Errors raised by the toolkit. Each validation variant names the violated
/// invariant and its magnitude.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M\u{2020}| = {gap:.3e}")]
    NotHermitian { gap: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator is not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPositive { min_eig: f64 },
    #[error("trace is {trace} but must be 1 (|drift| = {drift:.3e})")]
    TraceNotOne { trace: f64, drift: f64 },
    #[error("function undefined at {at}")]
    DomainError { at: f64 },
    #[error("constraint value {value} outside the attainable range ({lo}, {hi})")]
    ConstraintOutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("supports are not orthogonal: projection overlap {overlap:.3e}")]
    SupportsNotOrthogonal { overlap: f64 },
    #[error("not a family of orthogonal projections: {reason}")]
    NotAProjectionFamily { reason: String },
    #[error("decomposition needs at least {rank} components, got {count}")]
    InfeasibleCount { rank: usize, count: usize },
    #[error("dimension {dim} outside the supported range {lo}..={hi}")]
    BadDimension { dim: usize, lo: usize, hi: usize },
    #[error("state is rank deficient: rank {rank} < dim {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("observed matrix is not PSD: min eigenvalue {min_eig:.3e}")]
    MatrixNotPsd { min_eig: f64 },
    #[error("weights are not a probability triple")]
    NotAProbabilityTriple,
    #[error("vectors are not orthogonal: |\u{27e8}a|b\u{27e9}| = {overlap:.3e}")]
    NotOrthogonal { overlap: f64 },
    #[error("not a partition of unity: max |\u{03a3} V\u{1d62}*V\u{1d62} - I| = {gap:.3e}")]
    NotAPartition { gap: f64 },
    #[error("not a probability vector: {reason}")]
    BadProbabilityVector { reason: String },
    #[error("operator has cross-sector matrix elements: max {gap:.3e}")]
    SectorViolation { gap: f64 },
    #[error("invalid POVM: {reason}")]
    BadPovm { reason: String },
    #[error("vector is not unit norm: \u{2016}v\u{2016} = {norm}")]
    NotUnitNorm { norm: f64 },
    #[error("malformed input: {reason}")]
    BadFormat { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
