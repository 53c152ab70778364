use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("sample {index}: label {value} is not 1 or 2")]
    InvalidLabel { index: usize, value: i64 },

    #[error("sample {index}: x is not finite")]
    NonFiniteValue { index: usize },

    #[error("point ({a}, {b}) is not on the 1-simplex")]
    OffSimplex { a: f64, b: f64 },

    #[error("invalid split vector: {0}")]
    InvalidSplit(String),

    #[error("exhaustive search over {count} tuples exceeds the limit of {limit}")]
    TooManyTuples { count: u128, limit: u128 },

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
}
