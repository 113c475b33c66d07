use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what} exceeds limit {limit}")]
    ResourceLimit { what: &'static str, limit: usize },

    #[error("invalid concept at index {index}: extent and intent are not mutually closed")]
    InvalidConcept { index: usize },

    #[error("concept list is not the full lattice of the context")]
    NotFullLattice,

    #[error("column {0} is not active")]
    InactiveColumn(usize),

    #[error("index {index} out of range (bound {bound})")]
    OutOfRange { index: usize, bound: usize },

    #[error("extent {index} is not closed in the original context")]
    ExtentNotClosed { index: usize },

    #[error("{0}")]
    InvalidArgument(String),
}
