//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by graph ingestion, encoding, sampling and experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse: line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("asymmetric matrix: entries ({i},{j}) and ({j},{i}) differ")]
    Asymmetric { i: usize, j: usize },

    #[error("nonzero diagonal: entry ({i},{i}) = {value}")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("negative weight: {value} at ({i},{j})")]
    NegativeWeight { i: usize, j: usize, value: f64 },

    #[error("non-finite value: entry ({i},{j})")]
    NonFinite { i: usize, j: usize },

    #[error("self-loop: vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("duplicate edge: ({i},{j}) listed more than once")]
    DuplicateEdge { i: usize, j: usize },

    #[error("index out of range: vertex {index} with n={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid probability: {value} not in [0,1]")]
    InvalidProbability { value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("subset too small: need at least {need} vertices, got {got}")]
    SubsetTooSmall { need: usize, got: usize },

    #[error("empty subset")]
    EmptySubset,

    #[error("invalid subset: not sorted or contains duplicates")]
    SubsetNotSorted,

    #[error("dimension cap: matrix dimension {dim} exceeds cap {cap}")]
    DimCapExceeded { dim: usize, cap: usize },

    #[error("edgeless graph: the sampler program needs at least one positive-weight edge")]
    EdgelessGraph,

    #[error("not a clique: subset contains a non-adjacent pair")]
    NotAClique,

    #[error("all-zero singular values")]
    ZeroSingularValues,

    #[error("invalid photon target: mean photon number must be positive, got {0}")]
    InvalidPhotonTarget(f64),

    #[error("invalid transmission: eta must lie in (0,1], got {0}")]
    InvalidTransmission(f64),

    #[error("negative alpha: {0}")]
    NegativeAlpha(f64),

    #[error("odd-size sector: hafnian-weighted distributions need even k, got {k}")]
    OddSector { k: usize },

    #[error("empty sector: no size-{k} subset has a perfect matching")]
    EmptySector { k: usize },

    #[error("budget exceeded: enumeration needs ~{needed} products, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error(
        "rejection exhausted: no collision-free draw in {attempts} attempts \
         (measured acceptance rate {acceptance})"
    )]
    RejectionExhausted { attempts: u64, acceptance: f64 },

    #[error("wrong table kind: expected {expected}, got {got}")]
    WrongTableKind { expected: String, got: String },

    #[error("k out of range: k={k} with n={n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("graph too large: n={n} exceeds cap {cap} for exhaustive search")]
    ExhaustiveCapExceeded { n: usize, cap: usize },

    #[error("optimum unknown: supply the maximum clique weight or use a graph with n <= {cap}")]
    OptimumUnknown { cap: usize },

    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Short machine-parsable kind, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Asymmetric { .. } => "asymmetric matrix",
            Error::NonzeroDiagonal { .. } => "nonzero diagonal",
            Error::NegativeWeight { .. } => "negative weight",
            Error::NonFinite { .. } => "non-finite value",
            Error::SelfLoop { .. } => "self-loop",
            Error::DuplicateEdge { .. } => "duplicate edge",
            Error::IndexOutOfRange { .. } => "index out of range",
            Error::InvalidProbability { .. } => "invalid probability",
            Error::DimensionMismatch { .. } => "dimension mismatch",
            Error::SubsetTooSmall { .. } => "subset too small",
            Error::EmptySubset => "empty subset",
            Error::SubsetNotSorted => "invalid subset",
            Error::DimCapExceeded { .. } => "dimension cap",
            Error::EdgelessGraph => "edgeless graph",
            Error::NotAClique => "not a clique",
            Error::ZeroSingularValues => "all-zero singular values",
            Error::InvalidPhotonTarget(_) => "invalid photon target",
            Error::InvalidTransmission(_) => "invalid transmission",
            Error::NegativeAlpha(_) => "negative alpha",
            Error::OddSector { .. } => "odd-size sector",
            Error::EmptySector { .. } => "empty sector",
            Error::BudgetExceeded { .. } => "budget exceeded",
            Error::RejectionExhausted { .. } => "rejection exhausted",
            Error::WrongTableKind { .. } => "wrong table kind",
            Error::KOutOfRange { .. } => "k out of range",
            Error::ExhaustiveCapExceeded { .. } => "graph too large",
            Error::OptimumUnknown { .. } => "optimum unknown",
            Error::InvalidConfig(_) => "invalid config",
        }
    }
}
