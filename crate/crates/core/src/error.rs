use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("determinant is not 1: ad - bc = {0}")]
    NotUnimodular(String),
    #[error("parabolic-positive: torsion formula degenerate")]
    DegenerateTorsion,
    #[error("not hyperbolic: |trace| = {0} <= 2")]
    NotHyperbolic(String),
    #[error("empty string")]
    EmptyString,
    #[error("string entry {0} is below 2")]
    EntryBelowTwo(i64),
    #[error("malformed family parameters: {0}")]
    MalformedParams(String),
    #[error("special case: the string (3) is handled separately")]
    SpecialCase,
    #[error("string is not in the hyperbolic family")]
    NotInFamily,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("graph has {0} independent cycles; at most one is supported")]
    TooManyCycles(usize),
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph is not a single cycle")]
    NotACycle,
    #[error("self-join needs two distinct vertices")]
    SameVertex,
    #[error("unsupported word class: {0}")]
    UnsupportedWord(String),
    #[error("framing {0} is not +1 or -1")]
    BadFraming(i64),
    #[error("chain too short: {len} components, need at least {min}")]
    ChainTooShort { len: usize, min: usize },
    #[error("index {index} out of range for chain of length {len}")]
    BadIndex { index: usize, len: usize },
    #[error("class has finite order in H_1")]
    FiniteOrder,
    #[error("order must be positive, got {0}")]
    NonPositive(String),
    #[error("diagonal entry {0} is odd")]
    OddDiagonal(String),
    #[error("|det| = {0}, expected 1")]
    NotUnimodularForm(String),
    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("internal certificate check failed: {0}")]
    CertificateFailed(String),
}

impl Error {
    /// Stable short code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "not-square",
            Error::NotSymmetric => "not-symmetric",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NotUnimodular(_) => "not-sl2",
            Error::DegenerateTorsion => "parabolic-positive",
            Error::NotHyperbolic(_) => "not-hyperbolic",
            Error::EmptyString => "empty-string",
            Error::EntryBelowTwo(_) => "entry-below-two",
            Error::MalformedParams(_) => "malformed-params",
            Error::SpecialCase => "special-case",
            Error::NotInFamily => "not-in-family",
            Error::Parse { .. } => "parse",
            Error::UnknownVertex(_) => "unknown-vertex",
            Error::DuplicateVertex(_) => "duplicate-vertex",
            Error::TooManyCycles(_) => "too-many-cycles",
            Error::NotATree => "not-a-tree",
            Error::NotACycle => "not-a-cycle",
            Error::SameVertex => "same-vertex",
            Error::UnsupportedWord(_) => "unsupported-word",
            Error::BadFraming(_) => "bad-framing",
            Error::ChainTooShort { .. } => "chain-too-short",
            Error::BadIndex { .. } => "bad-index",
            Error::FiniteOrder => "finite-order",
            Error::NonPositive(_) => "non-positive",
            Error::OddDiagonal(_) => "odd-diagonal",
            Error::NotUnimodularForm(_) => "not-unimodular",
            Error::MalformedDescriptor(_) => "malformed-descriptor",
            Error::CertificateFailed(_) => "certificate-failed",
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
