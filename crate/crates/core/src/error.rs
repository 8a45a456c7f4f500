use thiserror::Error;

/// Errors produced by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gell-Mann index {0} is outside 1..=8")]
    GellMannIndex(usize),

    #[error("Pauli index {0} is outside 1..=3")]
    PauliIndex(usize),

    #[error("matrix is not in su(3): anti-Hermitian residual {anti_hermitian:e}, |trace| {trace:e}")]
    NotInAlgebra { anti_hermitian: f64, trace: f64 },

    #[error("matrix is not in SU(3): unitarity residual {unitarity:e}, |det - 1| {determinant:e}")]
    NotInGroup { unitarity: f64, determinant: f64 },

    #[error("basis is not orthonormal for the Killing form: max Gram deviation {0:e}")]
    NotOrthonormal(f64),

    #[error("(p, q) = (0, 0) does not define a circle subgroup")]
    TrivialSubgroup,

    #[error("W({p},{q}) is degenerate: p, q and p+q must all be nonzero for curvature computations")]
    Degenerate { p: i64, q: i64 },

    #[error("invalid metric coefficients: {0}")]
    InvalidMetric(String),

    #[error("angle {name} = {value} lies outside [{lo}, {hi})")]
    AngleRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("(a, b) is not a unit vector: |a|^2 + |b|^2 = {0}")]
    NotUnit(f64),

    #[error("metric Gram matrix is not positive definite at this chart point (det = {0:e})")]
    DegenerateChartPoint(f64),

    #[error("quadrature budget too small: estimated relative error {achieved:e} exceeds {requested:e}")]
    QuadratureBudget { achieved: f64, requested: f64 },

    #[error("volume density does not factor over the chart axes (relative residual {0:e})")]
    NotSeparable(f64),

    #[error("degenerate 2-plane: Gram determinant {0:e}")]
    DegeneratePlane(f64),

    #[error("budget {given} is below the minimum {min}")]
    Budget { given: usize, min: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("curvature source unavailable: {0}")]
    CurvatureUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
