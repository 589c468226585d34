use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate.
///
/// Callers that need to distinguish outcomes (the CLI exit codes, for
/// instance) match on the variant; the messages are written for humans.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have order at least 1")]
    EmptyMatrix,

    #[error("expected {expected} entries for an order-{n} matrix, got {got}")]
    BadShape { n: usize, expected: usize, got: usize },

    #[error("negative entry {value} at ({row}, {col}) in a nonnegative matrix")]
    NegativeEntry { row: usize, col: usize, value: String },

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("sign map disagrees with the support of the base matrix at ({row}, {col})")]
    SupportMismatch { row: usize, col: usize },

    #[error("image is not a bijection on 0..{n}")]
    InvalidPermutation { n: usize },

    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("matrix is reducible ({} strongly connected components)", components.len())]
    Reducible { components: Vec<Vec<usize>> },

    #[error("digraph has no closed path, so its period is undefined")]
    NoClosedPath,

    #[error("rotation exponent k={k} out of range 0..={max}")]
    RotationOutOfRange { k: u64, max: u64 },

    #[error("rotation denominator must be positive")]
    ZeroRotationDenominator,

    #[error("characteristic polynomial degrees differ: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("spectra have different sizes: {left} vs {right}")]
    SpectrumSizeMismatch { left: usize, right: usize },

    #[error("eigenvalue solver did not converge")]
    EigenSolver,

    #[error("entry magnitude too large for the numeric eigensolver")]
    NumericOverflow,

    #[error("signings have different base matrices")]
    BaseMismatch,

    #[error("matrix order {n} exceeds the cap {cap}")]
    OrderCapExceeded { n: usize, cap: usize },

    #[error("support size {m} exceeds the signing enumeration cap {cap}")]
    SupportCapExceeded { m: usize, cap: usize },

    #[error("order {n} exceeds the similarity class enumeration cap {cap}")]
    ClassCapExceeded { n: usize, cap: usize },

    #[error("order {n} exceeds the cycle enumeration cap {cap}")]
    CycleCapExceeded { n: usize, cap: usize },

    #[error("target period {p} is infeasible for order {n}")]
    InfeasiblePeriod { p: u64, n: usize },

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("graph is disconnected ({} components)", components.len())]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("orientation must direct all {edges} edges, got {got} directions")]
    DirectionMismatch { edges: usize, got: usize },

    #[error("orientations are over different graphs")]
    GraphMismatch,

    #[error("edge ({u}, {v}) is a loop; graphs here are simple")]
    LoopEdge { u: usize, v: usize },

    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },

    #[error("invalid bipartition: {reason}")]
    InvalidBipartition { reason: String },

    #[error("parse error: {0}")]
    Parse(String),
}
