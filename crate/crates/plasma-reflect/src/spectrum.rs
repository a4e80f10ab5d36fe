//! Discrete-spectrum analysis: argument-principle zero counting, location of
//! the plasma-mode zero eta0, the dispersion-relation solve omega(k), and the
//! domain-boundary curve L in the (gamma, epsilon) plane.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::dispersion::{lambda, lambda_c_cut, lambda_cut_principal, lambda_prime};
use crate::error::{Error, Result};
use crate::params::PlasmaParams;

const PI: f64 = std::f64::consts::PI;

/// Outcome of counting/locating discrete zeros of the dispersion function.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumResult {
    /// Number of zeros off the cut (0 or 2; zeros come in +- pairs).
    pub n_zeros: u32,
    /// Index kappa(G) of the boundary-value ratio along (0, 1).
    pub winding_index: i32,
    /// The zero with positive real part, when located.
    pub eta0: Option<Complex64>,
    /// |lambda(eta0)| after refinement.
    pub residual: Option<f64>,
    pub newton_iters: u32,
}

/// A point of the curve L separating D+ (two zeros) from D- (none).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DomainCurvePoint {
    pub tau: f64,
    pub gamma_l: f64,
    pub epsilon_l: f64,
}

/// Side of the curve L a real-(gamma, epsilon) point falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DomainClass {
    /// Two discrete zeros (index 1).
    DPlus,
    /// No discrete zeros (index 0).
    DMinus,
    /// Within the declared clearance of the curve; winding computations are
    /// unreliable here and the boundary-mode regime is out of scope.
    NearL,
}

/// Ratio G(tau) = lambda^+(tau)/lambda^-(tau) on the cut.
pub fn g_ratio(tau: f64, p: &PlasmaParams) -> Result<Complex64> {
    let lam = lambda_cut_principal(tau, p)?;
    let half_jump = Complex64::i() * PI * tau * (p.eta1_sq - tau * tau) / p.c;
    Ok((lam + half_jump) / (lam - half_jump))
}

/// G evaluated at tau = 1 - delta with delta passed as ln(delta), so the
/// logarithmic approach to the endpoint anchor G -> 1 can be probed far
/// beyond floating-point spacing of tau near 1.
pub fn g_ratio_tail(ln_delta: f64, p: &PlasmaParams) -> Complex64 {
    // tau ~ 1: lambda_c = 1 + (ln delta - ln 2)/2
    let lc = 1.0 + 0.5 * (ln_delta - std::f64::consts::LN_2);
    let lam = 1.0 - 1.0 / p.z0 + (1.0 / p.z0) * (1.0 - 1.0 / p.eta1_sq) * lc;
    let half_jump = Complex64::i() * PI * (p.eta1_sq - 1.0) / p.c;
    (lam + half_jump) / (lam - half_jump)
}

fn wrap_angle(mut d: f64) -> f64 {
    while d > PI {
        d -= 2.0 * PI;
    }
    while d <= -PI {
        d += 2.0 * PI;
    }
    d
}

// Argument increment over [t1, t2], bisecting until each step turns by less
// than pi/2. a1, a2 are principal arguments of G at the ends.
fn arg_increment(
    p: &PlasmaParams,
    t1: f64,
    a1: f64,
    t2: f64,
    a2: f64,
    depth: u32,
) -> Result<f64> {
    let d = wrap_angle(a2 - a1);
    if d.abs() <= PI / 2.0 {
        return Ok(d);
    }
    if depth == 0 {
        // cannot bound the per-step argument change: lambda^+- passes close
        // to zero, i.e. (gamma, epsilon) is near the curve L
        return Err(Error::NearCurveL);
    }
    let tm = 0.5 * (t1 + t2);
    let am = g_ratio(tm, p)?.arg();
    Ok(arg_increment(p, t1, a1, tm, am, depth - 1)?
        + arg_increment(p, tm, am, t2, a2, depth - 1)?)
}

/// Index of G(tau) along (0, 1) by continuous argument tracking.
///
/// The endpoints are excluded at clearance 1e-6 and anchored analytically:
/// G(0) = 1 and G(tau) -> 1 as tau -> 1, so the residual argument beyond the
/// clearance is below pi and rounding to the nearest turn is safe.
pub fn winding_index(p: &PlasmaParams) -> Result<i32> {
    const CLEARANCE: f64 = 1e-6;
    let mut knots: Vec<f64> = Vec::with_capacity(300);
    let mut t = CLEARANCE;
    while t < 0.05 {
        knots.push(t);
        t *= 2.0;
    }
    let n_mid = 180;
    for i in 0..=n_mid {
        knots.push(0.05 + (0.95 - 0.05) * i as f64 / n_mid as f64);
    }
    let mut u = 0.05;
    while u > CLEARANCE {
        u *= 0.5;
        knots.push(1.0 - u);
    }
    knots.sort_by(f64::total_cmp);

    let mut total = 0.0;
    let mut prev_t = 0.0;
    let mut prev_a = 0.0; // anchored at G(0) = 1
    for &tk in &knots {
        let a = g_ratio(tk, p)?.arg();
        total += if prev_t == 0.0 {
            let d = wrap_angle(a - prev_a);
            if d.abs() > PI / 2.0 {
                return Err(Error::NearCurveL);
            }
            d
        } else {
            arg_increment(p, prev_t, prev_a, tk, a, 40)?
        };
        prev_t = tk;
        prev_a = a;
    }
    let turns = total / (2.0 * PI);
    let kappa = turns.round();
    if (turns - kappa).abs() > 0.45 {
        return Err(Error::NearCurveL);
    }
    Ok(kappa as i32)
}

/// Zero count via the argument principle: N = 2 kappa(G).
pub fn count_zeros(p: &PlasmaParams) -> Result<SpectrumResult> {
    let kappa = winding_index(p)?;
    if kappa < 0 {
        return Err(Error::NearCurveL);
    }
    Ok(SpectrumResult {
        n_zeros: 2 * kappa as u32,
        winding_index: kappa,
        eta0: None,
        residual: None,
        newton_iters: 0,
    })
}

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITERS: u32 = 50;

// Damped Newton refinement of a zero of lambda. Returns (zero, residual, iters).
fn newton_refine(p: &PlasmaParams, start: Complex64) -> Result<(Complex64, f64, u32)> {
    let mut z = start;
    let mut f = lambda(z, p)?;
    for iter in 0..NEWTON_MAX_ITERS {
        if f.norm() < NEWTON_TOL {
            return Ok((z, f.norm(), iter));
        }
        let df = lambda_prime(z, p)?;
        if df.norm() == 0.0 {
            break;
        }
        let mut step = f / df;
        // zeros hugging the cut endpoint hit an ULP floor: the correction can
        // fall below the spacing of z while |lambda| stays above the absolute
        // tolerance (|lambda'| is large there). No f64 point does better, so
        // report the achieved residual as converged.
        if step.norm() <= 4.0 * f64::EPSILON * z.norm() {
            return Ok((z, f.norm(), iter));
        }
        let mut z_new = z - step;
        let mut f_new = match lambda(z_new, p) {
            Ok(v) => v,
            Err(_) => Complex64::new(f64::INFINITY, 0.0),
        };
        let mut halvings = 0;
        while f_new.norm() > f.norm() && halvings < 10 {
            step *= 0.5;
            z_new = z - step;
            f_new = match lambda(z_new, p) {
                Ok(v) => v,
                Err(_) => Complex64::new(f64::INFINITY, 0.0),
            };
            halvings += 1;
        }
        z = z_new;
        f = f_new;
    }
    if f.norm() < NEWTON_TOL {
        return Ok((z, f.norm(), NEWTON_MAX_ITERS));
    }
    Err(Error::NonConvergence {
        iters: NEWTON_MAX_ITERS as usize,
        residual: f.norm(),
    })
}

/// Section-8 seed for the plasma-mode zero at small k.
pub fn eta0_seed(k: f64, epsilon: f64) -> Complex64 {
    Complex64::new(1.0 + 0.3 * k * k, 0.5 * epsilon) / k
}

// Coarse |lambda| scan over the right half-annulus, used when no seed is
// available.
fn grid_scan(p: &PlasmaParams) -> Option<Complex64> {
    let r_max = (10.0 / p.epsilon).max(4.0);
    let r_min = 0.2;
    let nr = 60;
    let nt = 41;
    let mut best: Option<(f64, Complex64)> = None;
    for i in 0..nr {
        let r = r_min * (r_max / r_min).powf(i as f64 / (nr - 1) as f64);
        for j in 0..nt {
            let theta = -0.47 * PI + 0.94 * PI * j as f64 / (nt - 1) as f64;
            let z = Complex64::from_polar(r, theta);
            // keep off the cut
            if z.im.abs() < 0.02 && z.re <= 1.05 {
                continue;
            }
            if let Ok(v) = lambda(z, p) {
                let n = v.norm();
                if best.map_or(true, |(b, _)| n < b) {
                    best = Some((n, z));
                }
            }
        }
    }
    best.map(|(_, z)| z)
}

/// Locates the discrete zero with Re eta0 > 0 by Newton iteration.
pub fn find_eta0(p: &PlasmaParams, initial_guess: Option<Complex64>) -> Result<SpectrumResult> {
    let kappa = winding_index(p)?;
    if kappa <= 0 {
        return Ok(SpectrumResult {
            n_zeros: 0,
            winding_index: kappa,
            eta0: None,
            residual: None,
            newton_iters: 0,
        });
    }
    let seed = match initial_guess {
        Some(g) => g,
        None => match p.k {
            Some(k) => eta0_seed(k, p.epsilon),
            None => grid_scan(p).ok_or(Error::NonConvergence {
                iters: 0,
                residual: f64::INFINITY,
            })?,
        },
    };
    let (mut z, residual, iters) = newton_refine(p, seed)?;
    if z.re < 0.0 {
        // -eta0 is also a zero; report the positive-real-part member
        z = -z;
    }
    Ok(SpectrumResult {
        n_zeros: 2,
        winding_index: kappa,
        eta0: Some(z),
        residual: Some(residual),
        newton_iters: iters,
    })
}

/// Solves the dispersion relation for the complex detuning gamma at given
/// (k, epsilon): lambda(eta0) = 0 with eta0 = (1 + gamma + i epsilon)/k.
/// Newton on gamma, seeded by the long-wave expansion
/// gamma = 0.3 k^2 - 0.5 epsilon i.
pub fn solve_dispersion(k: f64, epsilon: f64) -> Result<PlasmaParams> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::InvalidInput(format!("k must be positive, got {k}")));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let residual_of = |gamma: Complex64| -> Result<Complex64> {
        let p = PlasmaParams::new(epsilon, gamma)?;
        lambda(p.eta0_from_k(k)?, &p)
    };
    let mut gamma = Complex64::new(0.3 * k * k, -0.5 * epsilon);
    let mut f = residual_of(gamma)?;
    for _ in 0..NEWTON_MAX_ITERS {
        if f.norm() < NEWTON_TOL {
            return Ok(PlasmaParams::new(epsilon, gamma)?.with_k(k));
        }
        // the residual is analytic in gamma, so a real-direction central
        // difference gives the complex derivative
        let h = 1e-7 * gamma.norm().max(1.0);
        let df = (residual_of(gamma + h)? - residual_of(gamma - h)?) / (2.0 * h);
        if df.norm() == 0.0 {
            break;
        }
        let mut step = f / df;
        let mut g_new = gamma - step;
        let mut f_new = residual_of(g_new).unwrap_or(Complex64::new(f64::INFINITY, 0.0));
        let mut halvings = 0;
        while f_new.norm() > f.norm() && halvings < 10 {
            step *= 0.5;
            g_new = gamma - step;
            f_new = residual_of(g_new).unwrap_or(Complex64::new(f64::INFINITY, 0.0));
            halvings += 1;
        }
        gamma = g_new;
        f = f_new;
    }
    if f.norm() < NEWTON_TOL {
        return Ok(PlasmaParams::new(epsilon, gamma)?.with_k(k));
    }
    // distinguish a mode-absent regime from plain failure
    let p = PlasmaParams::new(epsilon, gamma)?;
    if matches!(winding_index(&p), Ok(0)) {
        return Err(Error::ModeAbsent);
    }
    Err(Error::NonConvergence {
        iters: NEWTON_MAX_ITERS as usize,
        residual: f.norm(),
    })
}

// L-curve parametrization from the boundary condition lambda^+(tau) = 0 at
// real (gamma, epsilon).
fn curve_point(tau: f64) -> Option<(f64, f64)> {
    let l0 = lambda_c_cut(tau).ok()?;
    let s = PI / 2.0 * tau;
    let den = l0 * (s * s + (1.0 + l0) * (1.0 + l0));
    let l1 = -3.0 * tau * tau * (s * s + l0 * (1.0 + l0)).powi(2) / den;
    let l2 = -3.0 * tau * tau * s * s / den;
    if l1 < 0.0 || l2 < 0.0 {
        return None;
    }
    Some((-1.0 + l1.sqrt(), l2.sqrt()))
}

/// Evaluates the curve L on the given tau grid, emitting only real points
/// (both radicands non-negative).
pub fn domain_curve(tau_grid: &[f64]) -> Vec<DomainCurvePoint> {
    tau_grid
        .iter()
        .filter(|&&tau| tau > 0.0 && tau < 1.0)
        .filter_map(|&tau| {
            curve_point(tau).map(|(gamma_l, epsilon_l)| DomainCurvePoint {
                tau,
                gamma_l,
                epsilon_l,
            })
        })
        .collect()
}

/// tau where lambda_c on the cut changes sign; the curve L exists only for
/// tau beyond this root.
pub fn tau_curve_onset() -> f64 {
    let (mut lo, mut hi) = (0.8, 0.9);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if lambda_c_cut(mid).unwrap() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// Dense internal table of the curve, ordered by tau ascending (vertex of
// minimal gamma in the middle; epsilon decreases toward tau -> 1).
fn curve_table() -> &'static Vec<(f64, f64)> {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let onset = tau_curve_onset();
        // tau grid graded toward both ends: the lower branch runs off to
        // (gamma -> inf, eps -> 0) as tau -> 1, the upper branch to
        // (gamma -> inf, eps -> inf) as tau -> onset
        let mut taus: Vec<f64> = Vec::new();
        let n = 4000;
        let u_hi: f64 = 1.0 - (onset + 1e-9);
        let u_lo: f64 = 1e-13;
        for i in 0..n {
            let u = u_hi * (u_lo / u_hi).powf(i as f64 / (n - 1) as f64);
            taus.push(1.0 - u);
        }
        let m = 1500;
        let v_hi: f64 = u_hi;
        let v_lo: f64 = 1e-12;
        for i in 0..m {
            let v = v_lo * (v_hi / v_lo).powf(i as f64 / (m - 1) as f64);
            taus.push(onset + v);
        }
        taus.sort_by(f64::total_cmp);
        taus.dedup();
        taus.iter().filter_map(|&tau| curve_point(tau)).collect()
    })
}

fn dist_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Classifies a real-(gamma, epsilon) point against the curve L.
pub fn classify_domain(gamma: f64, epsilon: f64) -> DomainClass {
    classify_domain_with_tol(gamma, epsilon, 1e-3)
}

/// Classification with an explicit NearL clearance.
pub fn classify_domain_with_tol(gamma: f64, epsilon: f64, near_tol: f64) -> DomainClass {
    let table = curve_table();
    let q = (gamma, epsilon);
    let mut min_dist = f64::INFINITY;
    for w in table.windows(2) {
        min_dist = min_dist.min(dist_to_segment(q, w[0], w[1]));
    }
    if min_dist < near_tol {
        return DomainClass::NearL;
    }
    // the curve is a wedge opening toward large gamma; D- is its interior,
    // bounded below by the branch with tau -> 1 and above by the branch with
    // tau near the onset
    let vertex = table
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.0.total_cmp(&b.0))
        .map(|(i, _)| i)
        .unwrap();
    let gamma_vertex = table[vertex].0;
    if gamma <= gamma_vertex {
        return DomainClass::DPlus;
    }
    let eps_on = |branch: &[(f64, f64)]| -> Option<f64> {
        // branch runs with gamma monotone away from the vertex
        for w in branch.windows(2) {
            let (g0, g1) = (w[0].0, w[1].0);
            if (gamma >= g0.min(g1)) && (gamma <= g0.max(g1)) {
                let t = if g1 == g0 { 0.0 } else { (gamma - g0) / (g1 - g0) };
                return Some(w[0].1 + t * (w[1].1 - w[0].1));
            }
        }
        None
    };
    let upper = eps_on(&table[..=vertex]);
    let lower = eps_on(&table[vertex..]);
    match (lower, upper) {
        (Some(lo), Some(hi)) => {
            if epsilon > lo && epsilon < hi {
                DomainClass::DMinus
            } else {
                DomainClass::DPlus
            }
        }
        // outside the tabulated gamma range of a branch: treat the wedge as
        // extending monotonically; only the lower branch matters for small
        // epsilon queries
        (Some(lo), None) => {
            if epsilon > lo {
                DomainClass::DMinus
            } else {
                DomainClass::DPlus
            }
        }
        _ => DomainClass::DPlus,
    }
}
