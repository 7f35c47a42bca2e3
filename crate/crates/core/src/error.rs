use thiserror::Error;

/// Errors raised by the exact q-series machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("leaves are not numbered 1..h left to right: {0}")]
    NonConsecutiveLeaves(String),
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("lowering operator is undefined on V_(h,0)")]
    EmptyDomain,
    #[error("invalid coordinate slice {lo}..{hi} for h = {h}")]
    InvalidSlice { lo: usize, hi: usize, h: usize },
    #[error("vertex {0} has a leaf as right child")]
    RightChildIsLeaf(usize),
    #[error("target tree is not reachable by right-to-left transplantations")]
    NotRightReachable,
    #[error("function is not in the kernel of the lowering operator")]
    NotInKernel,
    #[error("radicand {0} is not the square of a rational")]
    NonSquareRadicand(String),
}

pub type Result<T, E = QError> = std::result::Result<T, E>;
