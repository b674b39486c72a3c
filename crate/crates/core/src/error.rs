use thiserror::Error;

use crate::pointset::PointSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a nonempty point set")]
    EmptySet,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dilation factor must be nonzero")]
    ZeroDilation,

    #[error("dilation factor q = {0} violates the requirement |q| > 1")]
    InvalidModulus(i64),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("rank < d: set has affine rank {rank} in dimension {dim}")]
    RankDeficient { rank: usize, dim: usize },

    #[error("set is not reduced (difference lattice has index {det})")]
    NotReduced { det: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("search budget exceeded: {required} candidate subsets needed, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("search space contains no subset of affine rank {dim} and size {size}")]
    EmptySearchSpace { dim: usize, size: usize },

    #[error("records mix different (d, q) parameters")]
    MixedRecords,

    #[error("bound violated: {name}: {detail}")]
    TheoremViolation {
        name: String,
        detail: String,
        witness: Box<PointSet>,
    },
}

impl From<std::num::TryFromIntError> for Error {
    fn from(_: std::num::TryFromIntError) -> Self {
        Error::Overflow
    }
}

pub(crate) fn check_modulus(q: i64) -> Result<()> {
    match q.checked_abs() {
        None => Err(Error::Overflow),
        Some(a) if a <= 1 => Err(Error::InvalidModulus(q)),
        Some(_) => Ok(()),
    }
}
