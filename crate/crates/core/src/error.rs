use thiserror::Error;

/// Errors raised by the algebra kernel.
///
/// Variant names are stable: the CLI forwards them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("InvalidPrime: {0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("CharacteristicMismatch: {0} vs {1}")]
    CharacteristicMismatch(u32, u32),
    #[error("RingMismatch: {0}")]
    RingMismatch(String),
    #[error("TruncationTooSmall: need N >= {needed}, got {got}")]
    TruncationTooSmall { needed: usize, got: usize },
    #[error("NotDivisible: coefficient of h^{index} is nonzero")]
    NotDivisible { index: usize },
    #[error("NotPthPower: {0}")]
    NotPthPower(String),
    #[error("NotClosed: {0}")]
    NotClosed(String),
    #[error("NotExact: {0}")]
    NotExact(String),
    #[error("NotLocallyExact: {0}")]
    NotLocallyExact(String),
    #[error("NeedsCoverExtension: {0}")]
    NeedsCoverExtension(String),
    #[error("NilpotencyTooDeep: {0}")]
    NilpotencyTooDeep(String),
    #[error("RelationViolated: {0}")]
    RelationViolated(String),
    #[error("UnsupportedShape: {0}")]
    UnsupportedShape(String),
    #[error("IntegrabilityViolated: {0}")]
    IntegrabilityViolated(String),
    #[error("NotCocycle: {0}")]
    NotCocycle(String),
    #[error("NotAUnit: {0}")]
    NotAUnit(String),
    #[error("DegreeOutOfRange: {0}")]
    DegreeOutOfRange(String),
    #[error("ParseError at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("InvalidInput: {0}")]
    InvalidInput(String),
}

impl Error {
    /// The semantic name of the error (the variant identifier).
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidPrime(_) => "InvalidPrime",
            Error::CharacteristicMismatch(..) => "CharacteristicMismatch",
            Error::RingMismatch(_) => "RingMismatch",
            Error::TruncationTooSmall { .. } => "TruncationTooSmall",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::NotPthPower(_) => "NotPthPower",
            Error::NotClosed(_) => "NotClosed",
            Error::NotExact(_) => "NotExact",
            Error::NotLocallyExact(_) => "NotLocallyExact",
            Error::NeedsCoverExtension(_) => "NeedsCoverExtension",
            Error::NilpotencyTooDeep(_) => "NilpotencyTooDeep",
            Error::RelationViolated(_) => "RelationViolated",
            Error::UnsupportedShape(_) => "UnsupportedShape",
            Error::IntegrabilityViolated(_) => "IntegrabilityViolated",
            Error::NotCocycle(_) => "NotCocycle",
            Error::NotAUnit(_) => "NotAUnit",
            Error::DegreeOutOfRange(_) => "DegreeOutOfRange",
            Error::Parse { .. } => "ParseError",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
