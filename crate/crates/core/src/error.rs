use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u64, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation needs a quadratic extension GF(q^2)")]
    NotQuadraticExtension,
    #[error("element {0} is not in the subfield GF(q)")]
    NotInSubfield(u32),
    #[error("operation needs characteristic {expected}, field has characteristic {found}")]
    WrongCharacteristic { expected: &'static str, found: u32 },

    #[error("points must be distinct")]
    EqualPoints,
    #[error("invalid coordinates: {0}")]
    InvalidCoordinates(String),

    #[error("blocks have non-uniform sizes ({first} and {other})")]
    NonUniformBlockSize { first: usize, other: usize },
    #[error("point pair ({0}, {1}) lies in {2} blocks, expected {3}")]
    PairCoverage(usize, usize, usize, usize),
    #[error("point {point} lies in {degree} blocks, expected {expected}")]
    NonUniformDegree { point: usize, degree: usize, expected: usize },
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error("parameters violate admissibility: {0}")]
    Inadmissible(String),

    #[error("operation requires lambda = 1, design has lambda = {0}")]
    LambdaNotOne(usize),
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("vertex subset of size {size} exceeds half of {total} vertices")]
    OversizedSubset { size: usize, total: usize },
    #[error("brute force needs about {estimate} subset visits, guard is {guard}")]
    WorkGuard { estimate: u128, guard: u128 },
    #[error("operation needs the {expected} graph")]
    FlavorMismatch { expected: &'static str },
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("no arc of size {0} exists")]
    Infeasible(usize),
    #[error("point set is not an arc")]
    NotAnArc,

    #[error("{0} out of domain")]
    Domain(String),
    #[error("certificate check failed: {0}")]
    Verification(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
