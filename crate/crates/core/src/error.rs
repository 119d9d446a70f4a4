use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {value} outside [0, 1] beyond tolerance")]
    InvalidProbability { value: f64 },

    #[error("overlap {value} at index {index} outside [0, 1]")]
    InvalidOverlap { index: usize, value: f64 },

    #[error("distribution sums to {sum}, expected 1 within {tolerance}")]
    NotNormalized { sum: f64, tolerance: f64 },

    #[error("eigenvalue {value} is negative beyond tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("index {index} out of range for {len} environment qubits")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate index {index} in fraction selection")]
    DuplicateIndex { index: usize },

    #[error("order is not a permutation of 0..{n}")]
    InvalidPermutation { n: usize },

    #[error(
        "enumerating {subsets} subsets exceeds the budget of {budget}; \
         use the sampled estimator instead"
    )]
    BudgetExceeded { subsets: f64, budget: u64 },

    #[error("state of {qubits} qubits exceeds the oracle size guard ({max})")]
    SizeGuard { qubits: usize, max: usize },

    #[error("no curve point reaches the threshold, including the full environment")]
    NoCrossing,

    #[error("{0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
