use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("a PL map needs at least one knot")]
    EmptyKnots,
    #[error("map is not increasing: {0}")]
    NonMonotone(String),
    #[error("denominator grew to {bits} bits, above the limit of {limit}")]
    DenominatorLimit { bits: u64, limit: u64 },
    #[error("set {0} is not a single open interval")]
    NotSingleInterval(usize),
    #[error("a chain system needs at least two generators")]
    FewerThanTwoGenerators,
    #[error("bad support shape: {0}")]
    BadSupportShape(String),
    #[error("system is not a prechain: {0}")]
    NotPrechain(String),
    #[error("system is not certified: {0}")]
    NotCertified(String),
    #[error("generator {0} is not in class A")]
    NotInClassA(usize),
    #[error("generator {0} has unbounded support")]
    UnboundedSupport(usize),
    #[error("need at least {needed} generators, got {got}")]
    TooFewGenerators { needed: usize, got: usize },
    #[error("{what}: nothing found within bound {bound}")]
    NotFound { what: String, bound: u64 },
    #[error("bad marked point: {0}")]
    BadMarkedPoint(String),
    #[error("empty window: {0}")]
    EmptyWindow(String),
    #[error("generator index {index} out of range for alphabet of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
