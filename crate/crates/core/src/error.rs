use thiserror::Error;

use crate::operators::ClassTag;

/// Errors raised by state construction, operator building and evaluation.
///
/// Index tuples carried by these variants are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension list is empty")]
    EmptyDims,
    #[error("subsystem {subsystem} has dimension 0")]
    ZeroDim { subsystem: usize },
    #[error("index {index:?} out of range at subsystem {subsystem} (dimension {dim}, indices are 1-based)")]
    IndexOutOfRange {
        index: Vec<usize>,
        subsystem: usize,
        dim: usize,
    },
    #[error("index {index:?} has {found} components, expected {expected}")]
    IndexArity {
        index: Vec<usize>,
        expected: usize,
        found: usize,
    },
    #[error("duplicate entry for index {index:?}")]
    DuplicateEntry { index: Vec<usize> },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("state has zero norm")]
    ZeroState,
    #[error("non-finite amplitude")]
    NonFinite,
    #[error("operator for subsystem {subsystem} is {found}x{found_cols}, expected {expected}x{expected}")]
    ShapeMismatch {
        subsystem: usize,
        expected: usize,
        found: usize,
        found_cols: usize,
    },
    #[error("expected {expected} operators, got {found}")]
    OperatorCount { expected: usize, found: usize },
    #[error("bad state label: {0}")]
    BadLabel(String),
    #[error("bad level pair ({k}, {l}) for dimension {dim}: need 1 <= k < l <= dim")]
    BadPair { dim: usize, k: usize, l: usize },
    #[error("missing phase for level pair ({k}, {l})")]
    MissingPhase { k: usize, l: usize },
    #[error("class {class} needs at least {needed} subsystems, state has {found}")]
    TooFewParts {
        class: ClassTag,
        needed: usize,
        found: usize,
    },
    #[error("total dimension {dim} exceeds the dense limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("expected a {expected}-partite state, got {found} subsystems")]
    WrongArity { expected: usize, found: usize },
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("local dimensions are not all equal: {0:?}")]
    UnequalDims(Vec<usize>),
    #[error("normalization constant {name} = {value} must be strictly positive")]
    BadNormalization { name: &'static str, value: f64 },
    #[error("bad optimizer configuration: {0}")]
    BadConfig(String),
    #[error("class {0} cannot be optimized; expected ghz or ghz-reduced")]
    NotOptimizable(ClassTag),
    #[error("singular draw: no invertible sample after {0} attempts")]
    SingularDraw(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
