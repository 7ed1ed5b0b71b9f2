use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input or parameters: the request itself is malformed.
    Input,
    /// A solver or search ran out of iterations, budget or precision.
    Numerical,
    /// A point fell outside the generator's domain or image.
    Domain,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate in point {0:?}")]
    NonFinite(Vec<f64>),

    #[error("empty point set")]
    EmptySet,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("set is not {k}-dimensional (affine dimension {affine_dim})")]
    NotFullDimensional { affine_dim: usize, k: usize },

    #[error("point {point:?} lies outside the domain of generator `{generator}`")]
    OutsideDomain { generator: String, point: Vec<f64> },

    #[error("point {point:?} lies outside the image of generator `{generator}`")]
    OutsideImage { generator: String, point: Vec<f64> },

    #[error("mean of tuple {tuple:?} failed: {source}")]
    Tuple {
        tuple: Vec<Vec<f64>>,
        #[source]
        source: Box<Error>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("grid resolution {resolution} too coarse: no grid point inside the hull")]
    ResolutionTooCoarse { resolution: f64 },

    #[error("no witness found down to margin {floor}")]
    ToleranceTooTight { floor: f64 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::OutsideDomain { .. } | Error::OutsideImage { .. } => ErrorClass::Domain,
            Error::NumericalFailure(_)
            | Error::ToleranceTooTight { .. }
            | Error::BudgetExceeded(_)
            | Error::ResolutionTooCoarse { .. } => ErrorClass::Numerical,
            Error::Tuple { source, .. } => source.class(),
            _ => ErrorClass::Input,
        }
    }
}
