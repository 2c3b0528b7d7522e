use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: i32, rank: usize },
    #[error("element {0} does not belong to this group model")]
    MixedModel(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("counting word must be nonempty")]
    EmptyWord,
    #[error("no stabilization of increments by n = {0}")]
    NoStabilization(usize),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("invariance violated: {0}")]
    InvariantViolation(String),
    #[error("cup product degree {0} exceeds the maximum {1}")]
    DegreeOverflow(usize, usize),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("pairing needs a norm bound: chain has tail {0} and the cochain is not homogeneous")]
    MissingNormBound(String),
    #[error("boundary of a degree-0 chain")]
    DegreeZero,
    #[error("value is not central: {0}")]
    CentralityViolation(String),
    #[error("section is not normalized: {0}")]
    SectionNotNormalized(String),
    #[error("kernel relation violated: {0}")]
    KernelRelationViolation(String),
    #[error("cell outside the computable degree window: {0}")]
    DegreeWindow(String),
    #[error("matrix budget exceeded: need {need_mb} MB, budget {budget_mb} MB")]
    BudgetExceeded { need_mb: u64, budget_mb: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}
