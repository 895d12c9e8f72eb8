use thiserror::Error;

/// Everything that can go wrong across the library: construction,
/// validation, search preconditions, and parsing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice needs at least one blown-up point")]
    EmptyLattice,

    #[error("class has {found} multiplicities, context expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the zero class spans no ray")]
    ZeroClass,

    #[error("operation needs at least 3 points, context has n = {0}")]
    TooFewPoints(usize),

    #[error("invalid generator: {0}")]
    BadGenerator(String),

    #[error("orbit budget must allow at least one class")]
    EmptyBudget,

    #[error("local type needs positive exponents, got {a}/{b}")]
    BadLocalType { a: u64, b: u64 },

    #[error("exponent pair ({rho},{delta}) is not coprime; normalize the type first")]
    NotCoprime { rho: u64, delta: u64 },

    #[error("no family in degree {0}; the catalog starts at degree 2")]
    DegreeOutOfRange(u64),

    #[error("family of degree {degree} has {expected} base points, got {found} weights")]
    WeightCount {
        degree: u64,
        expected: usize,
        found: usize,
    },

    #[error("weights and the pencil degree must be at least 1")]
    ZeroWeight,

    #[error("search bounds must be at least 1")]
    EmptySearchBounds,

    #[error("candidate class needs {needed} slots, context has only {have}")]
    LatticeTooSmall { needed: usize, have: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
