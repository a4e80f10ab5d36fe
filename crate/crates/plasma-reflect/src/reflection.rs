//! Assembly of the reflected-amplitude solution: the continuous-spectrum
//! weight Q(eta), the moment integrals m(+-eta0) and m(eta), the quadrature
//! Q_m, the pole-elimination constants and the final amplitude ratio K with
//! reflectance R = |K|^2 and phase shift phi = arg K.

use num_complex::Complex64;
use serde::Serialize;

use crate::dispersion::{lambda, lambda_cut_principal, lambda_prime, lambda_plus_t_cut, laurent, t};
use crate::error::{Error, Result};
use crate::params::PlasmaParams;
use crate::quadrature::{integrate, integrate_graded, QuadratureSpec};
use crate::spectrum::find_eta0;

const PI: f64 = std::f64::consts::PI;

/// Complete single-point solution of the reflection problem.
#[derive(Debug, Clone, Copy, Serialize)]
#[allow(non_snake_case)]
pub struct ReflectionResult {
    /// Amplitude ratio E2/E1 of the reflected to the incident wave.
    pub K: Complex64,
    /// Reflectance |K|^2.
    pub R: f64,
    /// Phase shift arg K in (-pi, pi]; pi at the specular limit.
    pub phi: f64,
    pub A_val: Complex64,
    pub B_val: Complex64,
    pub C_val: Complex64,
    pub D_val: Complex64,
    pub Qm: Complex64,
    pub quadrature_err: f64,
    pub eta0: Complex64,
    pub params: PlasmaParams,
    pub alpha_p: f64,
}

/// Numeric checks of the conservation laws the solution must satisfy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FlowDiagnostics {
    /// Incident energy flow.
    pub p_i: Complex64,
    /// Reflected energy flow.
    pub p_r: Complex64,
    /// Flow absorbed by the boundary, A_s/3.
    pub p_s: Complex64,
    /// Continuous-spectrum amplitude constant A1.
    pub a1: Complex64,
    /// |E1 + E2 + int_0^1 E(eta) d eta|: field continuity at x = 0.
    pub e0_residual: f64,
    /// |alpha_p P_r - alpha_p A_s/3 + A1 (1 - alpha_p)/36|.
    pub balance_residual: f64,
    /// Balance residual relative to the size of its terms.
    pub balance_rel: f64,
    /// |P_i - (P_r - A1/36)|: total momentum-flow bookkeeping.
    pub momentum_residual: f64,
}

/// Moment of the discrete mode, closed form:
/// m(w) = -(w^2 - eta1^2) [ -1/6 + w + w(w - 2/3) Log((w-1)/w) ], w = +-eta0.
pub fn m_discrete(eta0_signed: Complex64, p: &PlasmaParams) -> Result<Complex64> {
    let w = eta0_signed;
    if w.im == 0.0 && (0.0..=1.0).contains(&w.re) {
        return Err(Error::OnCut { z: w, cut: "[0, 1]" });
    }
    if w.norm() >= 4.0 {
        // the bracket cancels to O(1/w^2); its tail series is
        // sum_{m>=2} [2/(3(m+1)) - 1/(m+2)] w^{-m}, leading term -1/(36 w^2)
        let inv = 1.0 / w;
        let mut pow = inv * inv;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 2..=160 {
            let mf = m as f64;
            let add = (2.0 / (3.0 * (mf + 1.0)) - 1.0 / (mf + 2.0)) * pow;
            acc += add;
            if add.norm() <= 1e-18 * acc.norm() {
                break;
            }
            pow *= inv;
        }
        return Ok(-(w * w - p.eta1_sq) * acc);
    }
    let log = ((w - 1.0) / w).ln();
    Ok(-(w * w - p.eta1_sq) * (-1.0 / 6.0 + w + w * (w - 2.0 / 3.0) * log))
}

/// Moment of the continuous spectrum, closed form on 0 < eta < 1:
/// m(eta) = (1/6 - eta)(eta^2 - eta1^2)
///        + (eta - 2/3)[ -c + 2 eta^2 - eta (eta^2 - eta1^2) ln((1+eta)/eta) ].
pub fn m_cont(eta: f64, p: &PlasmaParams) -> Result<Complex64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidInput(format!("eta must lie in (0, 1), got {eta}")));
    }
    let e2 = Complex64::new(eta * eta, 0.0) - p.eta1_sq;
    let log = ((1.0 + eta) / eta).ln();
    Ok((1.0 / 6.0 - eta) * e2 + (eta - 2.0 / 3.0) * (-p.c + 2.0 * eta * eta - eta * e2 * log))
}

/// Spectral weight of the continuous modes,
/// Q(eta) = [ (2/3) eta (T + lambda)(eta) - lambda_inf eta^2 ] / (c lambda^+ lambda^-),
/// with the boundary-value product taken in the cancellation-free form
/// lambda^2 + [pi eta (eta1^2 - eta^2)/c]^2.
pub fn q_weight(eta: f64, p: &PlasmaParams) -> Result<Complex64> {
    q_weight_with(eta, p, laurent(p).lambda_inf)
}

// Same, with lambda_inf precomputed by the caller (hot path of Qm).
fn q_weight_with(eta: f64, p: &PlasmaParams, lambda_inf: Complex64) -> Result<Complex64> {
    let lam = lambda_cut_principal(eta, p)?;
    let s = PI * eta * (p.eta1_sq - eta * eta) / p.c;
    let product = lam * lam + s * s;
    let num = 2.0 / 3.0 * eta * lambda_plus_t_cut(eta, p)? - lambda_inf * eta * eta;
    let den = p.c * product;
    if den.norm() < 1e-14 * num.norm().max(1.0) {
        return Err(Error::DegenerateDenominator { magnitude: den.norm() });
    }
    Ok(num / den)
}

/// Q_m = int_0^1 m(eta) Q(eta) d eta, with panels graded toward both
/// endpoints (eta ln eta at 0, log growth at 1).
pub fn qm_integral(p: &PlasmaParams, spec: &QuadratureSpec) -> Result<(Complex64, f64)> {
    let linf = laurent(p).lambda_inf;
    let f = |eta: f64| -> Complex64 {
        match (m_cont(eta, p), q_weight_with(eta, p, linf)) {
            (Ok(m), Ok(q)) => m * q,
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    integrate_graded(f, 0.0, 1.0, spec)
}

// Relative-cancellation guard on the shared denominator alpha m(eta0) A + B C.
fn check_denominator(den: Complex64, t1: Complex64, t2: Complex64) -> Result<()> {
    if den.norm() < 1e-10 * (t1.norm() + t2.norm()) {
        return Err(Error::DegenerateDenominator { magnitude: den.norm() });
    }
    Ok(())
}

/// Amplitude ratio K of the reflected wave for accommodation coefficient
/// `alpha_p`, together with R, phi and all intermediates.
///
/// `params` must describe a point where the discrete mode exists; when the
/// recorded wave number already solves the dispersion relation the zero is
/// taken directly, otherwise it is located by `find_eta0`.
pub fn amplitude_ratio(
    params: &PlasmaParams,
    alpha_p: f64,
    spec: &QuadratureSpec,
) -> Result<ReflectionResult> {
    if !(0.0..=1.0).contains(&alpha_p) {
        return Err(Error::InvalidInput(format!(
            "alpha_p must lie in [0, 1], got {alpha_p}"
        )));
    }
    let eta0 = match params.k {
        Some(k) => {
            let e = params.eta0_from_k(k)?;
            if lambda(e, params)?.norm() < 1e-10 {
                e
            } else {
                find_eta0(params, Some(e))?.eta0.ok_or(Error::ModeAbsent)?
            }
        }
        None => find_eta0(params, None)?.eta0.ok_or(Error::ModeAbsent)?,
    };
    amplitude_ratio_with_eta0(params, eta0, alpha_p, spec)
}

/// Same assembly with eta0 pinned by the caller. The long-wave path uses
/// this to substitute the section-8 approximation instead of re-refining
/// toward the exact zero.
pub fn amplitude_ratio_with_eta0(
    params: &PlasmaParams,
    eta0: Complex64,
    alpha_p: f64,
    spec: &QuadratureSpec,
) -> Result<ReflectionResult> {
    if !(0.0..=1.0).contains(&alpha_p) {
        return Err(Error::InvalidInput(format!(
            "alpha_p must lie in [0, 1], got {alpha_p}"
        )));
    }
    let lambda_inf = laurent(params).lambda_inf;
    let a_val = 2.0 / 3.0 * t(eta0, params)? - lambda_inf * eta0;
    let b_val = (params.eta1_sq - eta0 * eta0) * lambda_prime(eta0, params)?;
    let (qm, quadrature_err) = qm_integral(params, spec)?;
    let c_val = (1.0 - alpha_p) / 36.0 + alpha_p * qm;
    let d_val = b_val / a_val;
    let m_p = m_discrete(eta0, params)?;
    let m_m = m_discrete(-eta0, params)?;

    let k_ratio = if alpha_p == 0.0 {
        // specular limit: full reflection with phase pi
        Complex64::new(-1.0, 0.0)
    } else {
        let den = alpha_p * m_p + c_val * d_val;
        check_denominator(den, alpha_p * m_p, c_val * d_val)?;
        let k1 = -1.0 + alpha_p * (m_p - m_m) / den;
        // the same ratio in undivided form; disagreement means breakdown
        let den2 = alpha_p * m_p * a_val + b_val * c_val;
        check_denominator(den2, alpha_p * m_p * a_val, b_val * c_val)?;
        let k2 = -(alpha_p * m_m * a_val + b_val * c_val) / den2;
        let rel = (k1 - k2).norm() / k1.norm().max(k2.norm());
        if rel > 1e-10 {
            return Err(Error::FormulaMismatch { rel_diff: rel });
        }
        k1
    };

    Ok(ReflectionResult {
        K: k_ratio,
        R: k_ratio.norm_sqr(),
        phi: k_ratio.arg(),
        A_val: a_val,
        B_val: b_val,
        C_val: c_val,
        D_val: d_val,
        Qm: qm,
        quadrature_err,
        eta0,
        params: *params,
        alpha_p,
    })
}

// int_0^1 and int_{-1}^0 moments of the discrete eigenfunctions
// F_+(mu) = (eta0 mu - eta1^2)/(eta0 - mu), F_-(mu) = (eta0 mu + eta1^2)/(eta0 + mu),
// against a polynomial weight.
fn discrete_moment(
    w: impl Fn(f64) -> f64,
    eta0: Complex64,
    sign: f64,
    a: f64,
    b: f64,
    p: &PlasmaParams,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let f = |mu: f64| -> Complex64 {
        w(mu) * (eta0 * mu - sign * p.eta1_sq) / (eta0 - sign * mu)
    };
    Ok(integrate(f, a, b, spec)?.0)
}

/// Conservation-law residuals of a completed solution.
///
/// E(eta) = z0 A1 Q(eta) is reconstructed from the pole-elimination constants
/// and the moments of the full distribution at x = 0 are evaluated with the
/// singular inner integrals reduced to closed form.
pub fn flow_diagnostics(r: &ReflectionResult, spec: &QuadratureSpec) -> Result<FlowDiagnostics> {
    let p = &r.params;
    let eta0 = r.eta0;
    let k_ratio = r.K;
    let alpha = r.alpha_p;
    let z0a1 = (1.0 + k_ratio) * r.B_val / r.A_val;
    let linf = laurent(p).lambda_inf;
    let e_weight = |eta: f64| -> Complex64 {
        match q_weight_with(eta, p, linf) {
            Ok(q) => z0a1 * q,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };

    // e(0) = E1 + E2 + int_0^1 E(eta) d eta with E1 = 1, E2 = K
    let (e_int, _) = integrate_graded(&e_weight, 0.0, 1.0, spec)?;
    let e0 = 1.0 + k_ratio + e_int;

    // continuous-spectrum moments: the inner PV integral of
    // w(mu)(eta mu - eta1^2)/(eta - mu) over (0, 1) is polynomial plus a log
    // for w = mu^2 and w = mu, leaving a single smooth outer integral.
    let cont_pos = |w_is_sq: bool| -> Result<Complex64> {
        let f = |eta: f64| -> Complex64 {
            let e2 = Complex64::new(eta * eta, 0.0) - p.eta1_sq;
            let log_pos = ((1.0 - eta) / eta).ln();
            let (poly, g_eta, w_eta) = if w_is_sq {
                (
                    eta * (1.0 / 3.0 + eta / 2.0 + eta * eta) - p.eta1_sq * (0.5 + eta),
                    eta * eta * e2,
                    eta * eta,
                )
            } else {
                (
                    eta * (0.5 + eta) - p.eta1_sq,
                    eta * e2,
                    eta,
                )
            };
            let pv = -(poly + g_eta * log_pos);
            let lam = match lambda_cut_principal(eta, p) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, f64::NAN),
            };
            e_weight(eta) * (pv - p.c * lam * w_eta / eta)
        };
        Ok(integrate_graded(f, 0.0, 1.0, spec)?.0)
    };
    let cont_neg = |w_is_sq: bool| -> Result<Complex64> {
        let f = |eta: f64| -> Complex64 {
            let e2 = Complex64::new(eta * eta, 0.0) - p.eta1_sq;
            let log_neg = ((1.0 + eta) / eta).ln();
            let (poly, g_eta) = if w_is_sq {
                (
                    eta * (1.0 / 3.0 - eta / 2.0 + eta * eta) - p.eta1_sq * (eta - 0.5),
                    eta * eta * e2,
                )
            } else {
                (eta * (eta - 0.5) - p.eta1_sq, eta * e2)
            };
            e_weight(eta) * (-poly + g_eta * log_neg)
        };
        Ok(integrate_graded(f, 0.0, 1.0, spec)?.0)
    };

    let musq = |mu: f64| mu * mu;
    let mu1 = |mu: f64| mu;
    let p_r = (k_ratio * discrete_moment(musq, eta0, 1.0, 0.0, 1.0, p, spec)?
        + discrete_moment(musq, eta0, -1.0, 0.0, 1.0, p, spec)?
        + cont_pos(true)?)
        / p.z0;
    let a_s = 2.0
        * (k_ratio * discrete_moment(mu1, eta0, 1.0, 0.0, 1.0, p, spec)?
            + discrete_moment(mu1, eta0, -1.0, 0.0, 1.0, p, spec)?
            + cont_pos(false)?)
        / p.z0;
    let p_i = (k_ratio * discrete_moment(musq, eta0, 1.0, -1.0, 0.0, p, spec)?
        + discrete_moment(musq, eta0, -1.0, -1.0, 0.0, p, spec)?
        + cont_neg(true)?)
        / p.z0;

    let a1 = z0a1 / p.z0;
    let balance = alpha * p_r - alpha * a_s / 3.0 + a1 / 36.0 * (1.0 - alpha);
    let scale = (alpha * p_r).norm() + (alpha * a_s / 3.0).norm() + (a1 / 36.0).norm();
    Ok(FlowDiagnostics {
        p_i,
        p_r,
        p_s: a_s / 3.0,
        a1,
        e0_residual: e0.norm(),
        balance_residual: balance.norm(),
        balance_rel: if scale == 0.0 { 0.0 } else { balance.norm() / scale },
        momentum_residual: (p_i - (p_r - a1 / 36.0)).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::lambda_cut;
    use crate::quadrature::gk15;
    use crate::spectrum::solve_dispersion;

    const SPEC: QuadratureSpec = QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_subdivisions: 400,
        endpoint_clearance: 1e-8,
    };

    fn golden_params() -> PlasmaParams {
        solve_dispersion(0.1, 0.01).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn m_discrete_golden() {
        let p = golden_params();
        let eta0 = p.eta0_from_k(0.1).unwrap();
        // frozen from the arbitrary-precision pipeline
        let m_p = Complex64::new(0.031467136972114075273, -0.000019307328460748393667);
        let m_m = Complex64::new(0.024757013224530746482, 0.000014467979672596887983);
        assert!(rel(m_discrete(eta0, &p).unwrap(), m_p) < 1e-12);
        assert!(rel(m_discrete(-eta0, &p).unwrap(), m_m) < 1e-12);
    }

    #[test]
    fn m_discrete_matches_defining_integral() {
        // m(w) = int_0^1 (mu^2 - 2mu/3)(w mu - eta1^2)/(w - mu) dmu
        let p = golden_params();
        let eta0 = p.eta0_from_k(0.1).unwrap();
        for w in [eta0, -eta0, Complex64::new(2.0, 1.0), Complex64::new(-0.4, 0.3)] {
            let f = |mu: f64| {
                (mu * mu - 2.0 * mu / 3.0) * (w * mu - p.eta1_sq) / (w - mu)
            };
            let (quad, _) = integrate(f, 0.0, 1.0, &SPEC).unwrap();
            assert!(rel(m_discrete(w, &p).unwrap(), quad) < 1e-9, "w = {w}");
        }
    }

    #[test]
    fn m_discrete_rejects_cut() {
        let p = golden_params();
        assert!(m_discrete(Complex64::new(0.5, 0.0), &p).is_err());
        assert!(m_discrete(Complex64::new(0.5, 0.3), &p).is_ok());
    }

    #[test]
    fn m_discrete_vanishing_prefactor() {
        let p = golden_params();
        let w = p.eta1_sq.sqrt();
        assert!(m_discrete(w, &p).unwrap().norm() < 1e-15);
    }

    #[test]
    fn m_cont_trivial_points() {
        let p = golden_params();
        // eta = 2/3 kills the second bracket
        let expected = (1.0 / 6.0 - 2.0 / 3.0) * (Complex64::new(4.0 / 9.0, 0.0) - p.eta1_sq);
        assert!(rel(m_cont(2.0 / 3.0, &p).unwrap(), expected) < 1e-14);
        // eta -> 0+: m -> -eta1^2/6 + 2c/3
        let limit = -p.eta1_sq / 6.0 + 2.0 * p.c / 3.0;
        assert!(rel(m_cont(1e-10, &p).unwrap(), limit) < 1e-7);
        assert!(m_cont(0.0, &p).is_err());
        assert!(m_cont(1.0, &p).is_err());
    }

    #[test]
    fn m_cont_matches_pv_integral() {
        // m(eta) = PV int_0^1 (mu^2 - 2mu/3)(eta1^2 - eta mu)/(mu - eta) dmu
        //          - c (eta - 2/3) lambda(eta)
        let p = golden_params();
        for &eta in &[0.15, 0.4, 0.8] {
            let g = |mu: f64| {
                (mu * mu - 2.0 * mu / 3.0) * (p.eta1_sq - eta * mu)
            };
            let (pv, _) = crate::quadrature::integrate_pv(g, 0.0, 1.0, eta, &SPEC).unwrap();
            let closed =
                pv - p.c * (eta - 2.0 / 3.0) * lambda_cut_principal(eta, &p).unwrap();
            assert!(rel(m_cont(eta, &p).unwrap(), closed) < 1e-9, "eta = {eta}");
        }
    }

    #[test]
    fn q_weight_product_identity() {
        // the cancellation-free boundary product equals lambda_plus*lambda_minus
        let p = golden_params();
        let linf = laurent(&p).lambda_inf;
        for &eta in &[0.05, 0.3, 0.62, 0.9, 0.99] {
            let s = lambda_cut(eta, &p).unwrap();
            let direct = s.lambda_plus * s.lambda_minus;
            let num = 2.0 / 3.0 * eta * s.lambda_plus_T - linf * eta * eta;
            let q_direct = num / (p.c * direct);
            assert!(rel(q_weight(eta, &p).unwrap(), q_direct) < 1e-12, "eta = {eta}");
        }
    }

    #[test]
    fn q_weight_small_eta() {
        let p = golden_params();
        let eta = 1e-9;
        let expected = 2.0 / 3.0 * eta / p.c;
        assert!(rel(q_weight(eta, &p).unwrap(), expected) < 1e-6);
    }

    #[test]
    fn qm_golden_and_self_convergence() {
        let p = golden_params();
        let (qm, err) = qm_integral(&p, &SPEC).unwrap();
        let golden = Complex64::new(0.023554061759854398904, 0.00003501090364344157922);
        assert!(rel(qm, golden) < 1e-9, "rel = {:.3e}", rel(qm, golden));
        assert!(err < 1e-9);
        // tightening tolerances 10x moves the value by < 1e-9 relative
        let tight = QuadratureSpec {
            abs_tol: SPEC.abs_tol / 10.0,
            rel_tol: SPEC.rel_tol / 10.0,
            ..SPEC
        };
        let (qm2, _) = qm_integral(&p, &tight).unwrap();
        assert!(rel(qm, qm2) < 1e-9);
    }

    #[test]
    fn qm_fixed_rule_reference() {
        // non-adaptive graded composite rule, ~10^4 abscissae
        let p = golden_params();
        let linf = laurent(&p).lambda_inf;
        let f = |eta: f64| m_cont(eta, &p).unwrap() * q_weight_with(eta, &p, linf).unwrap();
        let mut cuts: Vec<f64> = Vec::new();
        let n = 300;
        for i in 0..n {
            let w = 1e-10f64 * (0.5f64 / 1e-10).powf(i as f64 / n as f64);
            cuts.push(w);
            cuts.push(1.0 - w);
        }
        cuts.push(0.5);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut reference = Complex64::new(0.0, 0.0);
        let mut lo = 0.0;
        for &hi in cuts.iter().chain(std::iter::once(&1.0)) {
            if hi > lo {
                reference += gk15(&f, lo, hi).0;
                lo = hi;
            }
        }
        let (qm, _) = qm_integral(&p, &SPEC).unwrap();
        assert!(rel(qm, reference) < 1e-8, "rel = {:.3e}", rel(qm, reference));
    }

    #[test]
    fn specular_limit() {
        let p = golden_params();
        let r = amplitude_ratio(&p, 0.0, &SPEC).unwrap();
        assert_eq!(r.K, Complex64::new(-1.0, 0.0));
        assert_eq!(r.R, 1.0);
        assert_eq!(r.phi, PI);
    }

    #[test]
    fn golden_reflection_point() {
        // k = 0.1, eps = 0.01, alpha_p = 0.5, frozen from the
        // arbitrary-precision pipeline
        let p = golden_params();
        let r = amplitude_ratio(&p, 0.5, &SPEC).unwrap();
        let k_golden = Complex64::new(-0.9896832455552488752, -0.00011243730588451426513);
        assert!((r.K - k_golden).norm() < 1e-8, "K = {}", r.K);
        assert!((r.R - 0.97947293917491879706).abs() < 1e-8);
        assert!((r.phi - (-3.1414790442042592977)).abs() < 1e-8);
        assert_eq!(r.alpha_p, 0.5);
        assert_eq!(r.R, r.K.norm_sqr());
        assert_eq!(r.phi, r.K.arg());
    }

    #[test]
    fn reflectance_decreases_with_accommodation() {
        let p = golden_params();
        let r01 = amplitude_ratio(&p, 0.1, &SPEC).unwrap().R;
        let r05 = amplitude_ratio(&p, 0.5, &SPEC).unwrap().R;
        let r10 = amplitude_ratio(&p, 1.0, &SPEC).unwrap().R;
        assert!(r10 < r05 && r05 < r01, "{r10} {r05} {r01}");
        assert!(r01 < 1.0 && r10 <= 1.0 + 1e-9);
    }

    #[test]
    fn continuity_in_alpha() {
        let p = golden_params();
        let mut prev: Option<Complex64> = None;
        for i in 0..=20 {
            let a = i as f64 / 20.0;
            let k = amplitude_ratio(&p, a, &SPEC).unwrap().K;
            if let Some(q) = prev {
                assert!((k - q).norm() < 0.05, "jump at alpha = {a}");
            }
            prev = Some(k);
        }
    }

    #[test]
    fn rejects_bad_alpha() {
        let p = golden_params();
        assert!(amplitude_ratio(&p, -0.1, &SPEC).is_err());
        assert!(amplitude_ratio(&p, 1.5, &SPEC).is_err());
    }

    #[test]
    fn flow_balance() {
        let p = golden_params();
        let r = amplitude_ratio(&p, 0.5, &SPEC).unwrap();
        let d = flow_diagnostics(&r, &SPEC).unwrap();
        assert!(d.balance_rel < 1e-8, "balance_rel = {:.3e}", d.balance_rel);
        assert!(d.e0_residual < 1e-7, "e0 = {:.3e}", d.e0_residual);
        let scale = d.p_r.norm().max(d.a1.norm() / 36.0);
        assert!(d.momentum_residual < 1e-6 * scale.max(1e-12));
        // reflected flow is smaller than incident in magnitude
        assert!(d.p_r.norm() <= d.p_i.norm() * (1.0 + 1e-9));
    }

    #[test]
    fn flow_specular() {
        let p = golden_params();
        let r = amplitude_ratio(&p, 0.0, &SPEC).unwrap();
        let d = flow_diagnostics(&r, &SPEC).unwrap();
        // K = -1 forces A1 = 0 and every accommodation term with it
        assert!(d.a1.norm() < 1e-14);
        assert!(d.e0_residual < 1e-12);
        assert!(d.balance_residual < 1e-14);
    }
}
