use thiserror::Error;

/// Errors raised across the engine.
///
/// Each variant belongs to one of three families (domain, resource, internal)
/// which the command-line front end maps onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table is not closed: {0}")]
    NotClosed(String),
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("multiplication is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("homomorphisms do not share source and target")]
    MixedSignature,
    #[error("source or target of the two homomorphisms differ")]
    SignatureMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("action is not a homomorphism at ({p}, {q})")]
    ActionNotHomomorphism { p: usize, q: usize },
    #[error("action matrix of component {0} is not unimodular")]
    ActionNotUnimodular(usize),
    #[error("cocycle is not normalized at ({p}, {q})")]
    CocycleNotNormalized { p: usize, q: usize },
    #[error("cocycle identity fails at ({p}, {q}, {r})")]
    CocycleIdentityFails { p: usize, q: usize, r: usize },
    #[error("elements belong to different groups")]
    ParentMismatch,
    #[error("wrong coefficient kind: {0}")]
    WrongCoefficients(String),
    #[error("cochain is not a cocycle (witness {witness:?})")]
    NotACocycle { witness: Vec<usize> },
    #[error("obstruction solver failure: {0}")]
    ObstructionSolverFailure(String),
    #[error("simplicial operator {0:?} is not monotone or out of range")]
    NotMonotone(Vec<usize>),
    #[error("incompatible faces: {0}")]
    IncompatibleFaces(String),
    #[error("invalid cocycle pair: {0}")]
    InvalidPair(String),
    #[error("size limit exceeded: {what} ({size} > {limit})")]
    SizeLimitExceeded { what: String, size: u128, limit: u128 },
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn size_limit(what: impl Into<String>, size: u128, limit: u128) -> Self {
        Error::SizeLimitExceeded { what: what.into(), size, limit }
    }

    /// Process exit code: 1 for invalid input data, 2 for resource limits,
    /// 3 for internal invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeLimitExceeded { .. } => 2,
            Error::ObstructionSolverFailure(_) | Error::Internal(_) => 3,
            _ => 1,
        }
    }
}
