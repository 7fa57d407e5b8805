use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not anti-Hermitian (max deviation {deviation:.3e})")]
    NotAntiHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("negative eigenvalue {value:.3e} where a positive semidefinite matrix was required")]
    NegativeEigenvalue { value: f64 },

    #[error("generators do not form an orthogonal su(n) basis: {0}")]
    BasisInvalid(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("matrix does not have density-matrix shape: {0}")]
    NotDensityShape(String),

    #[error("invalid angular momenta: {0}")]
    InvalidAngularMomenta(String),

    #[error(
        "polarization components violate the hermiticity relation (deviation {deviation:.3e})"
    )]
    HermiticityViolation { deviation: f64 },

    #[error("initial state is not physical")]
    NonPhysicalInitialState,

    #[error("integration step too large: |v| drifted by {drift:.3e}")]
    StepTooLarge { drift: f64 },

    #[error("trajectory does not match the model: {0}")]
    ModelMismatch(String),

    #[error("Rabi amplitudes a and b are both zero")]
    DegenerateAmplitudes,

    #[error("state is not physical")]
    NonPhysical,

    #[error("separability verdict unsupported for {dim_a}x{dim_b} systems")]
    UnsupportedDims { dim_a: usize, dim_b: usize },

    #[error("vector is not normalized (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("trace mismatch: expected {expected}, found {found}")]
    TraceMismatch { expected: f64, found: f64 },

    #[error("block shape mismatch: {0}")]
    BlockShapeMismatch(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("parameters do not give a positive matrix: {0}")]
    NonPhysicalParameters(String),

    #[error("weights are not a probability vector: {0}")]
    InvalidSimplex(String),

    #[error("matrix is outside the canonical parameter set: {0}")]
    NonCanonical(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotAntiHermitian { .. } => "NotAntiHermitian",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NegativeEigenvalue { .. } => "NegativeEigenvalue",
            Error::BasisInvalid(_) => "BasisInvalid",
            Error::BasisMismatch(_) => "BasisMismatch",
            Error::NotDensityShape(_) => "NotDensityShape",
            Error::InvalidAngularMomenta(_) => "InvalidAngularMomenta",
            Error::HermiticityViolation { .. } => "HermiticityViolation",
            Error::NonPhysicalInitialState => "NonPhysicalInitialState",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::ModelMismatch(_) => "ModelMismatch",
            Error::DegenerateAmplitudes => "DegenerateAmplitudes",
            Error::NonPhysical => "NonPhysical",
            Error::UnsupportedDims { .. } => "UnsupportedDims",
            Error::NotUnitVector { .. } => "NotUnitVector",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::InvalidParams(_) => "InvalidParams",
            Error::TraceMismatch { .. } => "TraceMismatch",
            Error::BlockShapeMismatch(_) => "BlockShapeMismatch",
            Error::OutOfRange(_) => "OutOfRange",
            Error::NonPhysicalParameters(_) => "NonPhysicalParameters",
            Error::InvalidSimplex(_) => "InvalidSimplex",
            Error::NonCanonical(_) => "NonCanonical",
            Error::Malformed(_) => "Malformed",
        }
    }
}
