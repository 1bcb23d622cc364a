use thiserror::Error;

/// Errors raised by the linear-algebra kernels, state constructors and
/// measure evaluations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {len} entries for dimension {dim}")]
    NonSquare { dim: usize, len: usize },
    #[error("unsupported dimension {0}")]
    BadDimension(usize),
    #[error("matrix is not Hermitian (max |M - M†| = {0:e})")]
    NotHermitian(f64),
    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("trace deviates from 1 by {0:e}")]
    NotDensityLike(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("state vector is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("expected {expected} amplitudes, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("parameter {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("invalid label `{0}`")]
    InvalidLabel(alloc::string::String),
    #[error("unknown canonical state `{0}`")]
    UnknownName(alloc::string::String),
    #[error("rank must lie in 1..=8, got {0}")]
    BadRank(usize),
    #[error("decomposition size {size} is smaller than the state rank {rank}")]
    SizeTooSmall { size: usize, rank: usize },
    #[error("bipartition count needs n >= 2 and n <= 62, got {0}")]
    BadN(u32),
    #[error("unknown boundary curve `{0}`")]
    BadCurveId(alloc::string::String),
    #[error("grid needs at least 2 points, got {0}")]
    BadGrid(usize),
}
