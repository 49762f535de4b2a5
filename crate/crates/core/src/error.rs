use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Each variant maps to a stable
/// machine-readable code via [`Error::code`].
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("Cartan matrix is singular (determinant 0)")]
    Singular,
    #[error("Cartan matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("word is not reduced at position {0}")]
    NotReduced(usize),
    #[error("shell {length} has more than {cap} elements")]
    ShellLimit { length: usize, cap: usize },
    #[error("operation requires a rank-2 Cartan matrix, got rank {0}")]
    RankNot2(usize),
    #[error("symmetrized form is not indefinite")]
    NotIndefinite,
    #[error("field size {0} is not a prime power >= 2")]
    BadFieldSize(u64),
    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),
    #[error("argument s = {s} is within the pole guard of zeta ({factor})")]
    NearPole { s: String, factor: &'static str },
    #[error("zeta vanishes in the denominator at s = {0}")]
    ZeroDenominator(String),
    #[error("negative number of closed points of degree {0}")]
    CountsNegative(usize),
    #[error("Euler product diverges for Re(s) = {0} <= 1")]
    DivergentRegion(f64),
    #[error("m must be strictly positive, got {0:?}")]
    NonPositiveM(Vec<i64>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotGcm(_) => "NOT_GCM",
            Error::Singular => "SINGULAR",
            Error::NotSymmetrizable(_) => "NOT_SYMMETRIZABLE",
            Error::RankMismatch { .. } => "RANK_MISMATCH",
            Error::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
            Error::NotReduced(_) => "NOT_REDUCED",
            Error::ShellLimit { .. } => "SHELL_LIMIT",
            Error::RankNot2(_) => "RANK_NOT_2",
            Error::NotIndefinite => "NOT_INDEFINITE",
            Error::BadFieldSize(_) => "BAD_FIELD_SIZE",
            Error::InconsistentCounts(_) => "INCONSISTENT_COUNTS",
            Error::NearPole { .. } => "NEAR_POLE",
            Error::ZeroDenominator(_) => "ZERO_DENOMINATOR",
            Error::CountsNegative(_) => "COUNTS_NEGATIVE",
            Error::DivergentRegion(_) => "DIVERGENT_REGION",
            Error::NonPositiveM(_) => "NON_POSITIVE_M",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::Parse(_) => "PARSE",
        }
    }

    /// True for errors caused by malformed or invalid input rather than by
    /// a computation hitting a singularity or a resource limit.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotGcm(_)
                | Error::Singular
                | Error::NotSymmetrizable(_)
                | Error::RankMismatch { .. }
                | Error::IndexOutOfRange { .. }
                | Error::NotReduced(_)
                | Error::RankNot2(_)
                | Error::NotIndefinite
                | Error::BadFieldSize(_)
                | Error::InconsistentCounts(_)
                | Error::NonPositiveM(_)
                | Error::InvalidArgument(_)
                | Error::Parse(_)
        )
    }
}
