use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("image is not contained in the kernel")]
    ImageNotContained,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("matrix does not define a homomorphism: {0}")]
    NotWellDefined(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("colimit did not stabilize within a window of {window} levels")]
    NotStabilized { window: usize },
    #[error("colimit engine needs finite groups, level {level} is infinite")]
    InfiniteGroup { level: usize },
    #[error("level {level} is out of range (available: {available})")]
    LevelOutOfRange { level: usize, available: String },
    #[error("level {level} has only {cosets} cosets, at least {required} are needed")]
    LevelTooSmall {
        level: usize,
        cosets: String,
        required: usize,
    },
    #[error("elements live at different levels ({0} and {1})")]
    LevelMismatch(usize, usize),
    #[error("not a partition: {0}")]
    NotPartition(String),
    #[error("asymptotic question needs a tail assumption (explicit or geometric)")]
    TailRequired,
    #[error("operation is defined for the {expected} group only, got {got}")]
    WrongGroupKind { expected: String, got: String },
    #[error("{0} does not divide {1}")]
    NotDivisible(String, String),
    #[error("chain is not strictly increasing at {0}, {1}")]
    NotStrictlyIncreasing(String, String),
    #[error("unknown group kind {0:?}")]
    UnknownGroupKind(String),
    #[error("bad depth: {0}")]
    BadDepth(String),
    #[error("bad chain: {0}")]
    BadChain(String),
    #[error("bad tail: {0}")]
    BadTail(String),
    #[error("value too large for enumeration: {0}")]
    TooLarge(String),
    #[error("chain complex needs {needed} matrix entries, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable identifier of the variant, used in structured reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ImageNotContained => "ImageNotContained",
            Error::DomainMismatch(_) => "DomainMismatch",
            Error::NotWellDefined(_) => "NotWellDefined",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotStabilized { .. } => "NotStabilized",
            Error::InfiniteGroup { .. } => "InfiniteGroup",
            Error::LevelOutOfRange { .. } => "LevelOutOfRange",
            Error::LevelTooSmall { .. } => "LevelTooSmall",
            Error::LevelMismatch(..) => "LevelMismatch",
            Error::NotPartition(_) => "NotPartition",
            Error::TailRequired => "TailRequired",
            Error::WrongGroupKind { .. } => "WrongGroupKind",
            Error::NotDivisible(..) => "NotDivisible",
            Error::NotStrictlyIncreasing(..) => "NotStrictlyIncreasing",
            Error::UnknownGroupKind(_) => "UnknownGroupKind",
            Error::BadDepth(_) => "BadDepth",
            Error::BadChain(_) => "BadChain",
            Error::BadTail(_) => "BadTail",
            Error::TooLarge(_) => "TooLarge",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::Invalid(_) => "Invalid",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }
}
