use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV record")]
    Csv(#[from] csv::Error),

    #[error("row {row}, column {column}: cannot parse {cell:?} as a finite number")]
    Parse { row: usize, column: usize, cell: String },

    #[error("row {row} has {found} columns, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },

    #[error("input contains no data rows")]
    Empty,

    #[error("truth column {index} is out of range for {width} columns")]
    TruthColumnOutOfRange { index: usize, width: usize },

    #[error("invalid truth column selector {0:?} (expected `first`, `last` or an index)")]
    TruthSelector(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("negative distance {0}")]
    NegativeDistance(f64),

    #[error("{n} points exceed the dense matrix cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("edge list does not form a spanning tree over {n} points: {reason}")]
    NotSpanning { n: usize, reason: String },

    #[error("cluster is empty")]
    EmptyCluster,

    #[error("point {0} is already a member of the cluster")]
    AlreadyMember(usize),

    #[error("points {0} and {1} coincide; deduplicate before computing density gradients")]
    ZeroNeighborDistance(usize, usize),

    #[error("unknown synthetic preset {0:?}")]
    UnknownPreset(String),

    #[error("unknown kernel {0:?} (expected `gaussian` or `laplacian`)")]
    UnknownKernel(String),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("cost matrix contains a non-finite entry at ({row}, {col})")]
    NonFiniteCost { row: usize, col: usize },

    #[error("label {0} does not occur in the labeling")]
    MissingLabel(i64),

    #[error("malformed tree dump line {line}: {reason}")]
    TreeDump { line: usize, reason: String },
}
