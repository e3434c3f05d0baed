use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not in SU(2): {0}")]
    NotSu2(String),

    #[error("matrix is not a point of hyperbolic space: {0}")]
    NotHermitianPoint(String),

    #[error("critical point or pole of h at z = {0}")]
    CriticalPoint(Complex64),

    #[error("expression parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("continuation error: {0}")]
    Continuation(String),

    #[error("not a power-product expression near {0}")]
    NotPowerProduct(String),

    #[error("logarithmic singularity (dg exponent -1) at {0}: order undefined")]
    LogarithmicOrder(String),

    #[error("series expansion failed: {0}")]
    Series(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    QuadratureDivergence { estimate: f64, error: f64 },

    #[error("irregular singular point: {0}")]
    IrregularSingularity(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
