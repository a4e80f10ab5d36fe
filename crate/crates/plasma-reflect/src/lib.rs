//! Reflection of a longitudinal plasma wave from the boundary of a
//! degenerate-plasma half-space with a specular accommodative boundary
//! condition.
//!
//! The pipeline goes dispersion function -> discrete-spectrum analysis ->
//! singular-equation solution -> amplitude ratio K, reflectance R = |K|^2
//! and phase shift phi = arg K as functions of the wave number k, the
//! collision parameter epsilon and the accommodation coefficient alpha_p.

pub mod asymptotics;
pub mod dispersion;
pub mod error;
pub mod params;
pub mod quadrature;
pub mod reflection;
pub mod spectrum;
pub mod sweep;

pub use error::{Error, Result};
pub use params::PlasmaParams;
pub use quadrature::QuadratureSpec;
pub use reflection::{amplitude_ratio, flow_diagnostics, ReflectionResult};
pub use spectrum::{
    classify_domain, count_zeros, domain_curve, find_eta0, solve_dispersion, winding_index,
    DomainClass, SpectrumResult,
};
