use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group model mismatch: {0}")]
    ModelMismatch(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("element has non-integer coordinates: {0}")]
    NotInLattice(String),
    #[error("element {0} is outside the domain subgroup")]
    DomainError(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("inconsistent endomorphism: {0}")]
    InconsistentEndomorphism(String),
    #[error("invalid transversal: {0}")]
    InvalidTransversal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("the virtual endomorphism has no fixed element")]
    NoFixedElement,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("k-th power digits are not a transversal: {0}")]
    InvalidK(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("insufficient range for a growth fit: {0}")]
    InsufficientRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid letter {0}")]
    InvalidLetter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
