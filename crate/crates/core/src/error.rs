use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {from} does not divide target conductor {to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("alphabet mismatch: {0}")]
    Alphabet(String),
    #[error("relation is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("zero relation")]
    ZeroRelation,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid group data: {0}")]
    Group(String),
    #[error("invalid cocycle: {0}")]
    Cocycle(String),
    #[error("invalid duality: {0}")]
    Duality(String),
    #[error("invalid action: {0}")]
    Action(String),
    #[error("degree {degree} exceeds bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
