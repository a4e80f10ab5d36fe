//! Long-wave-limit closed forms: the small-k parameter expansion used both
//! as a fast path and as a cross-check of the exact dispersion solve.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::PlasmaParams;
use crate::quadrature::QuadratureSpec;
use crate::reflection::{amplitude_ratio_with_eta0, ReflectionResult};

/// Leading-order parameters at small k and epsilon:
/// gamma = 0.3 k^2 - 0.5 epsilon i.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LongWaveParams {
    pub k: f64,
    pub epsilon: f64,
    /// Re gamma = 0.3 k^2.
    pub gamma0: f64,
    /// Im gamma = -0.5 epsilon.
    pub gamma1: f64,
    /// 0.6 k^2 (1 - i epsilon).
    pub lambda_inf_lw: Complex64,
    /// 0.5 - i(1 + 0.3 k^2)/epsilon.
    pub z0_lw: Complex64,
    /// -i (epsilon/3)(1 + 0.3 k^2).
    pub eta1_sq_lw: Complex64,
    /// (1 + 0.3 k^2 + 0.5 epsilon i)/k.
    pub eta0_lw: Complex64,
}

/// Evaluates the long-wave parameter formulas. Intended for small k and
/// epsilon; validity is not enforced.
pub fn longwave_params(k: f64, epsilon: f64) -> Result<LongWaveParams> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidInput(format!("k must be positive, got {k}")));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let g0 = 0.3 * k * k;
    Ok(LongWaveParams {
        k,
        epsilon,
        gamma0: g0,
        gamma1: -0.5 * epsilon,
        lambda_inf_lw: 0.6 * k * k * Complex64::new(1.0, -epsilon),
        z0_lw: Complex64::new(0.5, -(1.0 + g0) / epsilon),
        eta1_sq_lw: Complex64::new(0.0, -epsilon / 3.0 * (1.0 + g0)),
        eta0_lw: Complex64::new(1.0 + g0, 0.5 * epsilon) / k,
    })
}

impl LongWaveParams {
    /// gamma0 + i gamma1 as a complex detuning.
    pub fn gamma(&self) -> Complex64 {
        Complex64::new(self.gamma0, self.gamma1)
    }

    /// Exact-machinery parameter bundle built from the approximate gamma.
    pub fn to_params(&self) -> Result<PlasmaParams> {
        Ok(PlasmaParams::new(self.epsilon, self.gamma())?.with_k(self.k))
    }
}

/// Full reflection pipeline with the long-wave gamma substituted for the
/// exact dispersion solve. The integrals themselves are not approximated.
pub fn longwave_reflectance(
    k: f64,
    epsilon: f64,
    alpha_p: f64,
    spec: &QuadratureSpec,
) -> Result<ReflectionResult> {
    let lw = longwave_params(k, epsilon)?;
    let p = lw.to_params()?;
    // gamma is approximate, so lambda(eta0_lw) is small but nonzero; pin
    // eta0 instead of letting the assembly re-refine it toward the exact zero
    amplitude_ratio_with_eta0(&p, lw.eta0_lw, alpha_p, spec)
}
