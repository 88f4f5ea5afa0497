use thiserror::Error;

/// Errors raised by the geometry, algebra and integration routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A point (or a finite-difference stencil point) lies outside the chart domain.
    #[error("point {point:?} is outside the domain of chart `{chart}`")]
    Domain { chart: String, point: Vec<f64> },
    /// The metric matrix could not be inverted.
    #[error("metric of chart `{chart}` is singular at {point:?}")]
    SingularMetric { chart: String, point: Vec<f64> },
    /// The plane spanned by two vectors is (numerically) degenerate.
    #[error("degenerate plane: area form {area:e} below threshold {threshold:e}")]
    DegeneratePlane { area: f64, threshold: f64 },
    #[error("sample count must be at least one")]
    EmptySample,
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    /// An algebra element carries an `h0` component where only `h1 + h2` is allowed.
    #[error("element is not tangent to G/H: e1 coefficient is nonzero")]
    NonTangent,
    #[error("matrix does not decompose over the su(2,1) basis: {0}")]
    BasisDecomposition(String),
    /// A parameter is outside the domain of a closed-form expression.
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
