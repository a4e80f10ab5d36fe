//! The dispersion function lambda(z) of the reflection problem, its boundary
//! values on the cut, derivative, Laurent coefficients, and the auxiliary
//! integrals T0(z) and T(z) in closed form.
//!
//! All complex logarithms use the principal branch. The log arguments are
//! arranged so they never cross the negative real axis while the argument
//! stays off the stated cut:
//!  - lambda_c uses Log((z-1)/(z+1)), whose argument is negative real exactly
//!    on [-1, 1];
//!  - T0 uses Log((z-1)/z), whose argument is negative real exactly on [0, 1].

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::PlasmaParams;

/// Leading Laurent coefficients of lambda(z) at infinity:
/// lambda(z) = lambda_inf + lambda2/z^2 + lambda4/z^4 + ...
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LaurentCoeffs {
    pub lambda_inf: Complex64,
    pub lambda2: Complex64,
    pub lambda4: Complex64,
}

/// Values of the cut functions at a point mu of (-1, 1).
#[derive(Debug, Clone, Copy)]
#[allow(non_snake_case)]
pub struct CutFunctionSample {
    pub mu: f64,
    /// Principal-value lambda(mu).
    pub lambda_principal: Complex64,
    /// Boundary value from the upper half-plane.
    pub lambda_plus: Complex64,
    /// Boundary value from the lower half-plane.
    pub lambda_minus: Complex64,
    /// T(mu) on the cut.
    pub T_value: Complex64,
    /// lambda(mu) + T(mu), from its own explicit formula on (0, 1).
    pub lambda_plus_T: Complex64,
}

fn on_segment(z: Complex64, lo: f64, hi: f64) -> bool {
    z.im == 0.0 && z.re >= lo && z.re <= hi
}

// Beyond this radius the closed forms are replaced by their Laurent tails:
// the logarithms cancel against the polynomial terms to O(1/z^2) and the
// direct evaluation loses precision quadratically in |z|.
const SERIES_RADIUS: f64 = 3.0;

// lambda_c(z) = -sum_{n>=1} z^{-2n}/(2n+1), convergent for |z| > 1.
fn lambda_c_tail(z: Complex64) -> Complex64 {
    let w = 1.0 / (z * z);
    let mut pow = w;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=80 {
        let add = pow / (2 * n + 1) as f64;
        acc += add;
        if add.norm() <= 1e-18 * acc.norm() {
            break;
        }
        pow *= w;
    }
    -acc
}


/// Case dispersion function `lambda_c(z) = 1 + (z/2) Log((z-1)/(z+1))` for z
/// off the cut [-1, 1]. Decays like -1/(3 z^2) at infinity.
pub fn lambda_c(z: Complex64) -> Result<Complex64> {
    if on_segment(z, -1.0, 1.0) {
        return Err(Error::OnCut { z, cut: "[-1, 1]" });
    }
    if z.norm() >= SERIES_RADIUS {
        return Ok(lambda_c_tail(z));
    }
    Ok(1.0 + z / 2.0 * ((z - 1.0) / (z + 1.0)).ln())
}

/// Principal-value of the Case function on the cut:
/// `1 + (mu/2) ln((1-mu)/(1+mu))`, real for |mu| < 1.
pub fn lambda_c_cut(mu: f64) -> Result<f64> {
    if !(mu.abs() < 1.0) {
        return Err(Error::OnCut {
            z: Complex64::new(mu, 0.0),
            cut: "endpoints of [-1, 1]",
        });
    }
    Ok(1.0 + mu / 2.0 * ((1.0 - mu) / (1.0 + mu)).ln())
}

/// Dispersion function
/// `lambda(z) = 1 - 1/z0 + (1/z0)(1 - z^2/eta1^2) lambda_c(z)`; even in z.
pub fn lambda(z: Complex64, p: &PlasmaParams) -> Result<Complex64> {
    if z.norm() >= SERIES_RADIUS {
        // full Laurent series lambda_inf + sum_n lambda_{2n} z^{-2n}, with the
        // leading coefficients written exactly as in `laurent` so the two
        // agree to the last bit
        let z0 = p.z0;
        let e2 = p.eta1_sq;
        let w = 1.0 / (z * z);
        let mut pow = w;
        let mut acc = 1.0 - 1.0 / z0 + 1.0 / (3.0 * z0 * e2);
        for n in 1..=80 {
            let nf = 2.0 * n as f64;
            let add = -(1.0 / z0) * (1.0 / (nf + 1.0) - 1.0 / ((nf + 3.0) * e2)) * pow;
            acc += add;
            if add.norm() <= 1e-18 * acc.norm() {
                break;
            }
            pow *= w;
        }
        return Ok(acc);
    }
    let lc = lambda_c(z)?;
    Ok(1.0 - 1.0 / p.z0 + (1.0 / p.z0) * (1.0 - z * z / p.eta1_sq) * lc)
}

/// Analytic derivative of the dispersion function.
pub fn lambda_prime(z: Complex64, p: &PlasmaParams) -> Result<Complex64> {
    if on_segment(z, -1.0, 1.0) {
        return Err(Error::OnCut { z, cut: "[-1, 1]" });
    }
    if z.norm() >= SERIES_RADIUS {
        // termwise derivative of the tail series:
        // lambda_c' = sum 2n/(2n+1) z^{-2n-1}, (z^2 lambda_c)' = sum 2n/(2n+3) z^{-2n-1}
        let w = 1.0 / (z * z);
        let mut pow = w / z;
        let mut d_lc = Complex64::new(0.0, 0.0);
        let mut d_z2lc = Complex64::new(0.0, 0.0);
        for n in 1..=80 {
            let f = 2.0 * n as f64;
            let a1 = f / (f + 1.0) * pow;
            let a2 = f / (f + 3.0) * pow;
            d_lc += a1;
            d_z2lc += a2;
            if a1.norm() <= 1e-18 * d_lc.norm() {
                break;
            }
            pow *= w;
        }
        return Ok((d_lc - d_z2lc / p.eta1_sq) / p.z0);
    }
    let log = ((z - 1.0) / (z + 1.0)).ln();
    let lc = 1.0 + z / 2.0 * log;
    let lc_prime = 0.5 * log + z / (z * z - 1.0);
    Ok((1.0 / p.z0) * (-2.0 * z / p.eta1_sq * lc + (1.0 - z * z / p.eta1_sq) * lc_prime))
}

/// Principal-value lambda on the cut.
pub fn lambda_cut_principal(mu: f64, p: &PlasmaParams) -> Result<Complex64> {
    let lc = lambda_c_cut(mu)?;
    Ok(1.0 - 1.0 / p.z0 + (1.0 / p.z0) * (1.0 - mu * mu / p.eta1_sq) * lc)
}

/// Sokhotsky boundary values and cut functions at mu in (-1, 1).
///
/// mu = 0 is the analytic limit: lambda_pm(0) = lambda(0) = 1, T(0) = 0.
pub fn lambda_cut(mu: f64, p: &PlasmaParams) -> Result<CutFunctionSample> {
    if !(mu.abs() < 1.0) {
        return Err(Error::OnCut {
            z: Complex64::new(mu, 0.0),
            cut: "endpoints of [-1, 1]",
        });
    }
    if mu == 0.0 {
        let one = Complex64::new(1.0, 0.0);
        return Ok(CutFunctionSample {
            mu,
            lambda_principal: one,
            lambda_plus: one,
            lambda_minus: one,
            T_value: Complex64::new(0.0, 0.0),
            lambda_plus_T: one,
        });
    }
    let principal = lambda_cut_principal(mu, p)?;
    let jump_half = Complex64::i() * std::f64::consts::PI * mu * (p.eta1_sq - mu * mu) / p.c;
    let t = t_cut_any(mu, p);
    let lpt = if mu > 0.0 {
        lambda_plus_t_cut(mu, p)?
    } else {
        principal + t
    };
    Ok(CutFunctionSample {
        mu,
        lambda_principal: principal,
        lambda_plus: principal + jump_half,
        lambda_minus: principal - jump_half,
        T_value: t,
        lambda_plus_T: lpt,
    })
}

/// Laurent coefficients, from the eta1^2/z0 form. Debug builds verify the
/// equivalent rational form in (gamma, epsilon) agrees.
pub fn laurent(p: &PlasmaParams) -> LaurentCoeffs {
    let z0 = p.z0;
    let e2 = p.eta1_sq;
    let coeffs = LaurentCoeffs {
        lambda_inf: 1.0 - 1.0 / z0 + 1.0 / (3.0 * z0 * e2),
        lambda2: -(1.0 / z0) * (1.0 / 3.0 - 1.0 / (5.0 * e2)),
        lambda4: -(1.0 / z0) * (1.0 / 5.0 - 1.0 / (7.0 * e2)),
    };
    debug_assert!({
        let alt = laurent_rational(p);
        (coeffs.lambda_inf - alt.lambda_inf).norm() <= 1e-10 * (1.0 + alt.lambda_inf.norm())
            && (coeffs.lambda2 - alt.lambda2).norm() <= 1e-10 * (1.0 + alt.lambda2.norm())
            && (coeffs.lambda4 - alt.lambda4).norm() <= 1e-10 * (1.0 + alt.lambda4.norm())
    });
    coeffs
}

/// Laurent coefficients from the explicit rational forms in (gamma, epsilon).
/// Kept public as the second algebraic route for cross-checks.
pub fn laurent_rational(p: &PlasmaParams) -> LaurentCoeffs {
    let g = p.gamma;
    let ie = Complex64::i() * p.epsilon;
    let d = 1.0 + g + ie;
    let d2 = d * d;
    LaurentCoeffs {
        lambda_inf: (2.0 * g + ie + g * (g + ie)) / d2,
        lambda2: -(9.0 + 5.0 * ie * d) / (15.0 * d2),
        lambda4: -(15.0 + 7.0 * ie * d) / (35.0 * d2),
    }
}

/// Auxiliary integral `T0(z) = (1/c) int_0^1 (eta^2 - eta1^2)/(eta - z) deta`
/// in closed form, for z off the cut [0, 1].
pub fn t0(z: Complex64, p: &PlasmaParams) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) || on_segment(z, 0.0, 1.0) {
        return Err(Error::OnCut { z, cut: "[0, 1]" });
    }
    if z.norm() >= SERIES_RADIUS {
        // tail series: T0 = (1/c) sum_{m>=1} (eta1^2/m - 1/(m+2)) z^{-m}
        let inv = 1.0 / z;
        let mut pow = inv;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 1..=160 {
            let mf = m as f64;
            let add = (p.eta1_sq / mf - 1.0 / (mf + 2.0)) * pow;
            acc += add;
            if add.norm() <= 1e-18 * acc.norm() {
                break;
            }
            pow *= inv;
        }
        return Ok(acc / p.c);
    }
    Ok((0.5 + z + (z * z - p.eta1_sq) * ((z - 1.0) / z).ln()) / p.c)
}

/// Odd auxiliary function `T(z) = z T0(z) + z T0(-z)` for z off [-1, 1].
pub fn t(z: Complex64, p: &PlasmaParams) -> Result<Complex64> {
    if on_segment(z, -1.0, 1.0) {
        return Err(Error::OnCut { z, cut: "[-1, 1]" });
    }
    Ok(z * t0(z, p)? + z * t0(-z, p)?)
}

// T on the cut, valid for 0 < |eta| < 1 (odd in eta).
fn t_cut_any(eta: f64, p: &PlasmaParams) -> Complex64 {
    eta / p.c * (1.0 + (eta * eta - p.eta1_sq) * (1.0 / (eta * eta) - 1.0).ln())
}

/// `T(eta) = (eta/c)[1 + (eta^2 - eta1^2) ln(1/eta^2 - 1)]` on the cut (0, 1).
pub fn t_cut(eta: f64, p: &PlasmaParams) -> Result<Complex64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidInput(format!("eta must lie in (0, 1), got {eta}")));
    }
    Ok(t_cut_any(eta, p))
}

/// `lambda(eta) + T(eta)` on (0, 1) in one explicit formula, free of the
/// cancellation between the two separate cut values:
/// `1 + (1/c)[eta - 2 eta^2 + 2 eta (eta^2 - eta1^2) ln(1/eta + 1)]`.
pub fn lambda_plus_t_cut(eta: f64, p: &PlasmaParams) -> Result<Complex64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidInput(format!("eta must lie in (0, 1), got {eta}")));
    }
    Ok(1.0
        + (eta - 2.0 * eta * eta
            + 2.0 * eta * (eta * eta - p.eta1_sq) * (1.0 / eta + 1.0).ln())
            / p.c)
}
