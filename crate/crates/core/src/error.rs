use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field of size {p}^{m} exceeds the supported maximum of 2^16 elements")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element index {index} out of range for field of size {q}")]
    InvalidElement { index: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },
    #[error("{what} of size {size} exceeds the configured cap {cap}")]
    SizeCap {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("enumeration of {count} elements exceeds the cap {cap}")]
    EnumerationCapExceeded { count: u128, cap: u128 },
    #[error("message length {n} exceeds the number of evaluation points {points}")]
    DegreeTooLarge { n: usize, points: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: reference to `{name}` before its definition")]
    ForwardReference { line: usize, name: String },
    #[error("circuit has no OUTPUT line")]
    NoOutput,
    #[error("line {line}: gate `{name}` defined twice")]
    DuplicateName { line: usize, name: String },
    #[error("expected {expected} input bits, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no soundness gap: {0}")]
    GapClosed(String),
    #[error("distinguished coordinate vanishes on the whole subspace")]
    EmptySlice,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
