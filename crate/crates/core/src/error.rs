use alloc::string::String;
use core::fmt;

/// Which of the two samples in a two-sample operation an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Higher,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Lower => f.write_str("lower"),
            Side::Higher => f.write_str("higher"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,
    #[error("invalid value at row {row}: observations must be finite")]
    InvalidValue { row: usize },
    #[error("empty sample")]
    EmptySample,
    #[error("empty sample on the {0} side")]
    EmptySide(Side),
    #[error("insufficient replicates: need at least 2, got {0}")]
    InsufficientReplicates(usize),
    #[error("insufficient sample: need at least {needed} observations, got {got}")]
    InsufficientSample { needed: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("invalid p-value {value} at index {index}")]
    InvalidPValue { index: usize, value: f64 },
    #[error("nothing to order: at least two categories are required")]
    NothingToOrder,
    #[error("undefined density: at least two nodes are required")]
    UndefinedDensity,
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("invalid mixture: {0}")]
    InvalidMixture(&'static str),
    #[error("node set mismatch between predicted and reference networks")]
    NodeSetMismatch,
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
}

pub type Result<T> = core::result::Result<T, Error>;
