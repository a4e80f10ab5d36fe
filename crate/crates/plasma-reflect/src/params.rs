//! Dimensionless parameter algebra of the reflection problem.
//!
//! Everything downstream works in the dimensionless variables
//! `epsilon = nu/omega_p` (collision parameter) and
//! `gamma = omega/omega_p - 1` (complex detuning). The derived constants
//! `omega1 = (1+gamma)/epsilon`, `z0 = 1 - i*omega1`,
//! `eta1_sq = epsilon^2 z0/3` and `c = 2 eta1_sq z0` appear throughout the
//! dispersion function and the singular-equation solution.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Immutable bundle of the problem parameters and derived complex constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlasmaParams {
    /// Collision parameter nu/omega_p, strictly positive.
    pub epsilon: f64,
    /// Detuning omega/omega_p - 1; complex when omega is complex.
    pub gamma: Complex64,
    /// omega/nu = (1+gamma)/epsilon.
    pub omega1: Complex64,
    /// 1 - i*omega1.
    pub z0: Complex64,
    /// epsilon^2 z0 / 3.
    pub eta1_sq: Complex64,
    /// 2 eta1_sq z0.
    pub c: Complex64,
    /// Dimensionless wave number, recorded when the parameters come from a
    /// dispersion-relation solve.
    pub k: Option<f64>,
}

impl PlasmaParams {
    /// Builds the parameter bundle from the collision parameter and detuning.
    pub fn new(epsilon: f64, gamma: Complex64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "epsilon must be finite and positive, got {epsilon}"
            )));
        }
        if !gamma.re.is_finite() || !gamma.im.is_finite() {
            return Err(Error::InvalidInput(format!("gamma must be finite, got {gamma}")));
        }
        let omega1 = (1.0 + gamma) / epsilon;
        let z0 = 1.0 - Complex64::i() * omega1;
        let eta1_sq = epsilon * epsilon * z0 / 3.0;
        let c = 2.0 * eta1_sq * z0;
        Ok(Self {
            epsilon,
            gamma,
            omega1,
            z0,
            eta1_sq,
            c,
            k: None,
        })
    }

    /// Same bundle with the wave number recorded.
    pub fn with_k(mut self, k: f64) -> Self {
        self.k = Some(k);
        self
    }

    /// Plasma-mode separation parameter from the wave number:
    /// `eta0 = (1 + gamma + i epsilon)/k`.
    pub fn eta0_from_k(&self, k: f64) -> Result<Complex64> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "wave number must be finite and positive, got {k}"
            )));
        }
        Ok((1.0 + self.gamma + Complex64::i() * self.epsilon) / k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    #[test]
    fn small_epsilon_resonant() {
        // eps=0.01, gamma=0: z0 = 1 - 100i, eta1_sq = (1e-4/3)(1 - 100i)
        let p = PlasmaParams::new(0.01, Complex64::new(0.0, 0.0)).unwrap();
        assert!(close(p.z0, Complex64::new(1.0, -100.0), 1e-15));
        assert!(close(p.eta1_sq, 1e-4 / 3.0 * Complex64::new(1.0, -100.0), 1e-15));
        assert!(close(p.c, 2.0 * p.eta1_sq * p.z0, 0.0));
    }

    #[test]
    fn zero_frequency_limit() {
        // eps=1, gamma=-1: omega1 = 0, z0 = 1
        let p = PlasmaParams::new(1.0, Complex64::new(-1.0, 0.0)).unwrap();
        assert_eq!(p.omega1, Complex64::new(0.0, 0.0));
        assert_eq!(p.z0, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn golden_fields() {
        // cross-checked against an independent arbitrary-precision evaluation
        let p = PlasmaParams::new(0.1, Complex64::new(0.003, -0.05)).unwrap();
        assert!(close(p.omega1, Complex64::new(10.03, -0.5), 1e-15));
        assert!(close(p.z0, Complex64::new(0.5, -10.03), 1e-15));
        assert!(close(
            p.eta1_sq,
            Complex64::new(0.0016666666666666666667, -0.033433333333333333333),
            1e-15
        ));
        assert!(close(p.c, Complex64::new(-0.669006, -0.066866666666666666667), 1e-15));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(PlasmaParams::new(0.0, Complex64::new(0.0, 0.0)).is_err());
        assert!(PlasmaParams::new(-0.1, Complex64::new(0.0, 0.0)).is_err());
        assert!(PlasmaParams::new(f64::NAN, Complex64::new(0.0, 0.0)).is_err());
        assert!(PlasmaParams::new(0.1, Complex64::new(f64::INFINITY, 0.0)).is_err());
        let p = PlasmaParams::new(0.1, Complex64::new(0.0, 0.0)).unwrap();
        assert!(p.eta0_from_k(0.0).is_err());
        assert!(p.eta0_from_k(-1.0).is_err());
    }

    #[test]
    fn eta0_examples() {
        let p = PlasmaParams::new(0.01, Complex64::new(0.0, 0.0)).unwrap();
        assert!(close(p.eta0_from_k(0.1).unwrap(), Complex64::new(10.0, 0.1), 1e-15));

        // gamma = 0.3 k^2 - 0.5 eps i at k=0.2, eps=0.01
        let p = PlasmaParams::new(0.01, Complex64::new(0.012, -0.005)).unwrap();
        assert!(close(p.eta0_from_k(0.2).unwrap(), Complex64::new(5.06, 0.025), 1e-14));

        // 1 + gamma = 0
        let p = PlasmaParams::new(0.3, Complex64::new(-1.0, 0.0)).unwrap();
        assert!(close(p.eta0_from_k(2.0).unwrap(), Complex64::new(0.0, 0.15), 1e-15));
    }

    proptest! {
        #[test]
        fn derived_identities(eps in 1e-4f64..10.0, gre in -2.0f64..2.0, gim in -1.0f64..1.0) {
            let p = PlasmaParams::new(eps, Complex64::new(gre, gim)).unwrap();
            let z0_alt = 1.0 - Complex64::i() * (1.0 + p.gamma) / eps;
            prop_assert!(close(p.z0, z0_alt, 1e-15));
            prop_assert!(close(p.eta1_sq, eps * eps * p.z0 / 3.0, 1e-15));
            prop_assert!(close(p.c, 2.0 * p.eta1_sq * p.z0, 1e-15));
        }

        #[test]
        fn eta0_inverts(eps in 1e-3f64..1.0, gre in -0.5f64..0.5, k in 1e-3f64..1.0) {
            let p = PlasmaParams::new(eps, Complex64::new(gre, 0.0)).unwrap();
            let eta0 = p.eta0_from_k(k).unwrap();
            let back = eta0 * k - Complex64::i() * eps;
            prop_assert!(close(back, 1.0 + p.gamma, 1e-14));
        }
    }
}
