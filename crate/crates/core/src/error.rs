use std::fmt;

/// A violated projection-valued measure axiom, with the atoms that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The number of projectors differs from the number of atoms.
    AtomCount { expected: usize, found: usize },
    /// `P(a)^2 != P(a)`.
    NotIdempotent { atom: String },
    /// `P(a) P(b) != 0` for distinct atoms.
    NotOrthogonal { first: String, second: String },
    /// `sum_a P(a) != 1_H`.
    NotComplete,
    /// `||P(a)|| > 1`.
    NotContractive { atom: String },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::AtomCount { expected, found } => {
                write!(f, "expected {expected} atom projectors, found {found}")
            }
            AxiomViolation::NotIdempotent { atom } => {
                write!(f, "projector of atom {atom:?} is not idempotent")
            }
            AxiomViolation::NotOrthogonal { first, second } => {
                write!(
                    f,
                    "projectors of atoms {first:?} and {second:?} are not orthogonal"
                )
            }
            AxiomViolation::NotComplete => write!(f, "atom projectors do not sum to the identity"),
            AxiomViolation::NotContractive { atom } => {
                write!(f, "projector of atom {atom:?} has norm greater than 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("{0} is not a prime")]
    InvalidPrime(u32),
    #[error("precision {precision} is out of range for p = {prime}")]
    InvalidPrecision { prime: u32, precision: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("no square root: {0}")]
    NoSquareRoot(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("operands live on different clopen algebras")]
    AlgebraMismatch,
    #[error("partition mismatch: expected {expected} values, found {found}")]
    PartitionMismatch { expected: usize, found: usize },
    #[error("projection-valued measure axiom violated: {0}")]
    MeasureAxiom(AxiomViolation),
    #[error("operators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PrimeMismatch(..) => "prime-mismatch",
            Error::InvalidPrime(_) => "invalid-prime",
            Error::InvalidPrecision { .. } => "invalid-precision",
            Error::DivisionByZero => "division-by-zero",
            Error::NoSquareRoot(_) => "no-square-root",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::SpaceMismatch => "space-mismatch",
            Error::AlgebraMismatch => "algebra-mismatch",
            Error::PartitionMismatch { .. } => "partition-mismatch",
            Error::MeasureAxiom(_) => "measure-axiom",
            Error::NonCommuting(..) => "non-commuting",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidInput(_) => "invalid-input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
