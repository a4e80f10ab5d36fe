//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Argument lies on (or too close to) a branch cut of the requested function.
    #[error("argument {z} lies on the cut {cut}")]
    OnCut { z: Complex64, cut: &'static str },

    /// Adaptive quadrature could not meet the tolerance within the
    /// subdivision budget. Carries the best estimate so the caller can
    /// decide whether to accept it.
    #[error("quadrature did not converge: estimate {value}, error bound {err_estimate:.3e}")]
    QuadratureNonConvergence {
        value: Complex64,
        err_estimate: f64,
    },

    #[error("iteration did not converge after {iters} steps (last residual {residual:.3e})")]
    NonConvergence { iters: usize, residual: f64 },

    /// Winding computation refused: the boundary values of the dispersion
    /// function pass too close to zero, i.e. (gamma, epsilon) is near the
    /// domain-boundary curve L.
    #[error("parameters too close to the domain-boundary curve L")]
    NearCurveL,

    /// The discrete plasma mode does not exist for these parameters.
    #[error("no discrete plasma mode for these parameters (zero count 0)")]
    ModeAbsent,

    /// Relative cancellation in the amplitude-ratio denominator.
    #[error("degenerate amplitude-ratio denominator (|den| = {magnitude:.3e})")]
    DegenerateDenominator { magnitude: f64 },

    /// The two algebraic routes to the amplitude ratio disagree beyond
    /// tolerance, which indicates a numerical breakdown upstream.
    #[error("amplitude-ratio formulas disagree: {rel_diff:.3e} relative")]
    FormulaMismatch { rel_diff: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
