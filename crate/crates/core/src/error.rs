use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("search-capped: {0}")]
    SearchCapped(String),
    #[error("no-triple-system: n = {0} is not 1 or 3 mod 6 with n >= 7")]
    NoTripleSystem(usize),
    #[error("prime-required: q = {0}")]
    PrimeRequired(usize),
    #[error("unsupported-design: n = {n}, block size {c}")]
    UnsupportedDesign { n: usize, c: usize },
    #[error("parameter-infeasible: {0}")]
    ParameterInfeasible(String),
    #[error("unknown-parameter: {0}")]
    UnknownParameter(String),
    #[error("block-too-large: {0} edges exceed the enumeration cap")]
    BlockTooLarge(usize),
    #[error("empty-part")]
    EmptyPart,
    #[error("cleanup-collapsed: set {0} emptied")]
    CleanupCollapsed(usize),
    #[error("degree-exceeded: vertex {vertex} has degree {degree}")]
    DegreeExceeded { vertex: usize, degree: usize },
    #[error("container-bounds-exceeded: k = {k} (bound {k_bound}), tree degree {tree_degree} (bound {degree_bound})")]
    ContainerBoundsExceeded {
        k: usize,
        k_bound: usize,
        tree_degree: usize,
        degree_bound: usize,
    },
    #[error("pattern-too-large: {pattern} vertices for a host on {host}")]
    PatternTooLarge { pattern: usize, host: usize },
    #[error("witness-incomplete: no witness for auxiliary edge ({0}, {1})")]
    WitnessIncomplete(usize, usize),
    #[error("cycle-embedding-failed: deepest partial assignment has {} of the positions", deepest.len())]
    CycleEmbeddingFailed { deepest: Vec<(usize, usize)> },
    #[error("precondition-failed: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
