use thiserror::Error;

/// Errors raised by the library. Classification outcomes (off-surface, curve, ...) are
/// never errors; these are for malformed input and mathematically impossible requests.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("exponent overflow at position {pos}")]
    ExponentOverflow { pos: usize },
    #[error("field error: {0}")]
    BadField(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("arity mismatch: expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("forms are linearly dependent (rank {rank} < 4)")]
    DependentForms { rank: usize },
    #[error("positive-dimensional base locus: gcd of the forms is {gcd}")]
    BaseCurve { gcd: String },
    #[error("the image of the parameterization is not a surface: {0}")]
    NotASurface(String),
    #[error("gcd of all-zero input")]
    AllZero,
    #[error("invalid point: {0}")]
    BadPoint(String),
    #[error("base point of the parameterization: {0}")]
    BasePoint(String),
    #[error("corank {corank} != 1 at nu={nu}")]
    NotUnique { corank: usize, nu: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("minor request: {0}")]
    Minors(String),
    #[error("internal error: {0}")]
    Internal(String),
}
