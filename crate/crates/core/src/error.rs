use thiserror::Error;

/// Broad class of a failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: bad syntax, inconsistent parameters, out-of-range values.
    Input,
    /// A mathematical precondition does not hold (bad reduction, hypothesis failure, ...).
    Precondition,
    /// An internal consistency check failed.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero input where a nonzero value is required: {0}")]
    ZeroInput(&'static str),

    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("coefficient fields do not match")]
    FieldMismatch,

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("not a morphism: {0}")]
    NotMorphism(String),

    #[error("kernel is not contained in the a-torsion (nonzero remainder)")]
    KernelNotContained,

    #[error("subgroup is not stable under the module action")]
    NotStable,

    #[error("quotient is not compatible with gamma: d_part(psi_T) = {found}, expected {expected}")]
    GammaIncompatible { found: String, expected: String },

    #[error("bad reduction at {place}: {reason}")]
    BadReduction { place: String, reason: String },

    #[error("prime {0} coincides with the place of reduction")]
    NotCoprime(String),

    #[error("no splitting field of tower degree <= {cap} found")]
    SplittingFieldTooLarge { cap: usize },

    #[error("argument {0} outside the domain [-1/e, 0) of W_-1")]
    LambertDomain(f64),

    #[error("lemma hypothesis c^(1/b) * b / ln a >= e fails (value {value})")]
    LemmaHypothesis { value: f64 },

    #[error("invalid bound parameters: {0}")]
    InvalidParams(String),

    #[error("empty place list")]
    NoPlaces,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotPrime(_)
            | Error::InvalidField(_)
            | Error::ZeroInput(_)
            | Error::Parse { .. }
            | Error::FieldMismatch
            | Error::InvalidModule(_)
            | Error::InvalidParams(_)
            | Error::NoPlaces
            | Error::NotIrreducible(_) => ErrorKind::Input,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Precondition,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
