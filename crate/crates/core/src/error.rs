use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("selected {rows} rows but {cols} columns")]
    MismatchedShape { rows: usize, cols: usize },
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("cost vector lies in the row space of A")]
    DegenerateCost,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("subset is not a circuit: kernel dimension {0}")]
    NotACircuit(usize),
    #[error("matrix has rank {0}, expected 2")]
    RankDeficient(usize),
    #[error("line points are projectively identical")]
    IdenticalPoints,
    #[error("polynomial vanishes identically on the line")]
    ZeroRestriction,
    #[error("n = {n} exceeds the enumeration limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("Newton iteration diverged in region {sign} at lambda = {lambda:e}")]
    NewtonDivergence { sign: String, lambda: f64 },
    #[error("step leaves region {sign} at lambda = {lambda:e}")]
    LeftRegion { sign: String, lambda: f64 },
    #[error("trace needs a 2-dimensional ambient space, found {0}")]
    AmbientNot2D(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("cannot parse polynomial: {0}")]
    ParsePolynomial(String),
    #[error("system Ax = b is inconsistent")]
    Inconsistent,
    #[error("region {0} is empty")]
    EmptyRegion(String),
}

pub type Result<T> = std::result::Result<T, Error>;
