use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("transform length {len} exceeds field capacity {capacity}")]
    TransformTooLarge { len: usize, capacity: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("y-truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("series is not invertible (constant term is not a unit)")]
    NotInvertible,

    #[error("invalid constant term: expected {expected}")]
    InvalidConstantTerm { expected: &'static str },

    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },

    #[error("expected {expected} residues, got {got}")]
    ResidueCount { expected: usize, got: usize },

    #[error("weight {weight} out of range for quota {quota}")]
    WeightOutOfRange { weight: u64, quota: u64 },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),
}
