use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("quiver has an oriented cycle")]
    CyclicQuiver,
    #[error("quiver is not connected")]
    DisconnectedQuiver,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quiver is not of Dynkin type")]
    NotDynkin,
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("{0:?} is not a positive root")]
    NotARoot(Vec<i64>),
    #[error("representation is not indecomposable (endomorphism dimension {0})")]
    NotIndecomposable(usize),
    #[error("object left the cataloged components: {0}")]
    CatalogMiss(String),
    #[error("catalog does not contain every indecomposable (quiver is not Dynkin)")]
    CatalogIncomplete,
    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("zero object")]
    ZeroObject,
    #[error("central charge of simple {vertex} lies outside the semiclosed upper half plane")]
    NotAStabilityFunction { vertex: usize },
    #[error("object {0} is not semistable; only objects with semistable summands are supported")]
    NotAllSemistable(String),
    #[error("semistable image left the cataloged components: {0}")]
    HeartEscape(String),
    #[error("no rotation places every simple in the standard heart")]
    HeartMismatch,
    #[error("global dimension {gldim} is too large (need {bound})")]
    GldimTooLarge { gldim: f64, bound: String },
    #[error("vertex subset does not induce a connected full subquiver")]
    NotConnectedSubset,
    #[error("exceptional collection extraction stalled after {0} objects")]
    ExtractionStalled(usize),
    #[error("genus {0} is too small (need g >= 2)")]
    GenusTooSmall(u32),
    #[error("numerical class (rank {rank}, degree {degree}) is zero or not in the heart")]
    InvalidClass { rank: i64, degree: i64 },
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::CyclicQuiver => "CyclicQuiver",
            Error::DisconnectedQuiver => "DisconnectedQuiver",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotDynkin => "NotDynkin",
            Error::QuiverMismatch => "QuiverMismatch",
            Error::NotARoot(_) => "NotARoot",
            Error::NotIndecomposable(_) => "NotIndecomposable",
            Error::CatalogMiss(_) => "CatalogMiss",
            Error::CatalogIncomplete => "CatalogIncomplete",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::ZeroObject => "ZeroObject",
            Error::NotAStabilityFunction { .. } => "NotAStabilityFunction",
            Error::NotAllSemistable(_) => "NotAllSemistable",
            Error::HeartEscape(_) => "HeartEscape",
            Error::HeartMismatch => "HeartMismatch",
            Error::GldimTooLarge { .. } => "GldimTooLarge",
            Error::NotConnectedSubset => "NotConnectedSubset",
            Error::ExtractionStalled(_) => "ExtractionStalled",
            Error::GenusTooSmall(_) => "GenusTooSmall",
            Error::InvalidClass { .. } => "InvalidClass",
            Error::EmptyGrid => "EmptyGrid",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
