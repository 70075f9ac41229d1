use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmzvError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("word `{0}` is not a product of z_k = y x^(k-1)")]
    NotZWord(String),
    #[error("element is not in {space}: offending word `{word}`")]
    NotInSubspace { space: &'static str, word: String },
    #[error("divergent symbol {0}: index is not admissible")]
    Divergent(String),
    #[error("arity mismatch: shape expects {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("point lies outside the summation region")]
    OutsideRegion,
    #[error("relation has no terms after cancellation")]
    TrivialRelation,
    #[error("relations of mixed weight: expected {expected}, found {found}")]
    MixedWeight { expected: u32, found: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, CmzvError>;
