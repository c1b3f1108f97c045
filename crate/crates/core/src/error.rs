use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("degenerate geometry: {0}")]
    Geometry(&'static str),
    #[error("{what} index {index} out of range (len {len})")]
    Lookup {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("value {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },
    #[error("size mismatch for {what}: expected {expected}, got {got}")]
    Size {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("singular matrix: zero pivot in column {column}")]
    Singular { column: usize },
}
