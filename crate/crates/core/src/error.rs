use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("degenerate nodes: {0}")]
    DegenerateNodes(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("evaluation point is collocated with node {index}")]
    Collocated { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point {point:?} lies outside the {shape} reference region")]
    OutOfRegion {
        shape: &'static str,
        point: Vec<f64>,
    },

    #[error("collapse map is singular at {0:?}")]
    SingularCollapse(Vec<f64>),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown shape `{0}`")]
    UnknownShape(String),

    #[error("report error: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;
