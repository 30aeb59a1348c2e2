use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field `{name}` is registered with spin {left} on one side and {right} on the other")]
    RegistryMismatch { name: String, left: i32, right: i32 },

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("duplicate field `{0}` in registry")]
    DuplicateField(String),

    #[error("difference has a pure-constant term {0}; constants are not total derivatives")]
    ConstantResidual(String),

    #[error("negative power ∂^{0} needs a truncation floor")]
    MissingFloor(i32),

    #[error("depth must be at least 1")]
    ZeroDepth,

    #[error("insufficient depth {given}; at least {required} is needed")]
    InsufficientDepth { given: usize, required: usize },

    #[error("invalid Lax operator: {0}")]
    InvalidLax(String),

    #[error("wrong basis or hierarchy: {0}")]
    WrongBasis(String),

    #[error("flow is not local: unexpected ∂^{0} term in the commutator")]
    NonLocalFlow(i32),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("json: {0}")]
    Json(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid window ({p}, {q}): lowest degree exceeds highest")]
    InvalidWindow { p: i32, q: i32 },
}

pub type Result<T> = std::result::Result<T, Error>;
