use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not a unit")]
    NotAUnit,
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    #[error("algebra has no declared scalar extension")]
    NoExtension,
    #[error("algebra is not finite")]
    NotFinite,
    #[error("operation requires characteristic zero")]
    CharNotZero,
    #[error("element is not nilpotent")]
    NotNilpotent,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("index out of range: {0}")]
    BadIndex(String),
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("coefficient algebra is not a field")]
    NotAField,
    #[error("base field has no primitive {0}-th roots of unity")]
    NoRootsOfUnity(u64),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
