use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("term k = {k} of the direct sum overflows binary64")]
    Range { k: u64 },

    #[error("phase evaluated at the logarithmic singularity T_{k} (s = {s})")]
    Singularity { k: i64, s: Complex64 },

    #[error("degenerate saddle: {0}")]
    DegenerateSaddle(String),

    #[error("Newton iteration for saddle k = {k} did not converge: last iterate {last}, residual {residual:e}")]
    NoConvergence {
        k: i64,
        last: Complex64,
        residual: f64,
    },

    #[error("Newton iteration for saddle k = {k} escaped its basin (landed at {landed})")]
    BasinEscape { k: i64, landed: Complex64 },

    #[error("adaptive quadrature did not reach tolerance {requested:e} (achieved {achieved:e})")]
    Quadrature { requested: f64, achieved: f64 },

    #[error("no Stokes connection for saddles ({k}, {}) in (0, pi/2)", k + 1)]
    StokesNotFound { k: u32 },

    #[error("theta = {theta_pi} pi lies below the chart; the chart needs the pair ({needed}, {})", needed + 1)]
    InsufficientChart { theta_pi: f64, needed: u32 },

    #[error("figure output: {0}")]
    Output(String),
}
