use thiserror::Error;

/// Errors produced by the quiver analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex function has {found} entries but the quiver has {expected} vertices")]
    VertexMismatch { expected: usize, found: usize },

    #[error("dimension vectors must be nonnegative, found {value} at position {position}")]
    NegativeDimension { position: usize, value: i64 },

    #[error("the quiver has an oriented cycle through arrows {cycle:?}")]
    CyclicQuiver { cycle: Vec<usize> },

    #[error("the quiver is not connected ({components} components)")]
    DisconnectedQuiver { components: usize },

    #[error("unsupported dimension vector: {0}")]
    UnsupportedDimensionVector(String),

    #[error("stability parameter pairs to {pairing} with the dimension vector, expected 0")]
    PairingNonzero { pairing: i64 },

    #[error("dimension vector is divisible by {gcd}")]
    Divisible { gcd: i64 },

    #[error("the zero dimension vector admits no weight-one character")]
    ZeroDimensionVector,

    #[error("assumption `{assumption}` does not hold{}", witness_suffix(.witness))]
    AssumptionViolated {
        assumption: String,
        witness: Option<Vec<i64>>,
    },

    #[error("representations live on different quivers or have mismatched shapes: {0}")]
    QuiverMismatch(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("dimension vector is not 1 at the endpoints of the path ({source_dim}, {target_dim})")]
    NotThinAtEndpoints { source_dim: i64, target_dim: i64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("enumeration needs {required} objects, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("framing scale must be at least 1")]
    InvalidScale,

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

fn witness_suffix(witness: &Option<Vec<i64>>) -> String {
    match witness {
        Some(w) => format!(" (witness {w:?})"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
