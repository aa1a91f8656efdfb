use core::fmt;

/// Errors produced by the evaluation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A mask needs 2 or 3 extents, each at least 1, and data matching their product.
    InvalidDims {
        /// Offending extents.
        dims: alloc::vec::Vec<usize>,
        /// Length of the supplied data.
        len: usize,
    },
    /// Two inputs that must share a shape do not.
    DimsMismatch {
        /// Extents of the left operand.
        left: alloc::vec::Vec<usize>,
        /// Extents of the right operand.
        right: alloc::vec::Vec<usize>,
    },
    /// The operation is defined for a different dimensionality.
    UnsupportedDimensionality {
        /// Dimensionality the operation needs.
        expected: usize,
        /// Dimensionality that was supplied.
        got: usize,
    },
    /// A metric has no defined value for the given inputs.
    UndefinedMetric(&'static str),
    /// Correlation of a constant vector.
    ZeroVariance,
    /// Score vectors do not cover the same methods.
    MismatchedMethods,
    /// Not enough entries to rank or correlate.
    TooFewEntries {
        /// Minimum required.
        needed: usize,
        /// Entries supplied.
        got: usize,
    },
    /// A parameter outside its valid range.
    InvalidParameter(&'static str),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDims { dims, len } => {
                write!(f, "invalid mask shape {dims:?} for {len} data elements")
            }
            Error::DimsMismatch { left, right } => {
                write!(f, "mask shapes differ: {left:?} vs {right:?}")
            }
            Error::UnsupportedDimensionality { expected, got } => {
                write!(f, "operation needs a {expected}D mask, got {got}D")
            }
            Error::UndefinedMetric(why) => write!(f, "metric undefined: {why}"),
            Error::ZeroVariance => write!(f, "correlation undefined for a constant vector"),
            Error::MismatchedMethods => write!(f, "score vectors cover different methods"),
            Error::TooFewEntries { needed, got } => {
                write!(f, "need at least {needed} entries, got {got}")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
