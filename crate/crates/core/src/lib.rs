//! Nonlinear Perron-Frobenius machinery on finite-dimensional closed cones:
//! order calculus, cone metrics (Funk/Thompson/Hilbert), a Euclidean Jordan
//! algebra kernel for symmetric cones, a catalog of order-preserving
//! homogeneous maps, cone spectral radii with Collatz-Wielandt certificates,
//! horofunction evaluation, and orbit dynamics with Denjoy-Wolff style
//! reports.
//!
//! ```
//! use conegeo_core::{ConeDescriptor, hilbert, m_ratio};
//!
//! let cone = ConeDescriptor::orthant(2);
//! let x = cone.point(vec![1.0, 2.0])?;
//! let y = cone.point(vec![2.0, 1.0])?;
//!
//! // M(x/y) = max_i x_i/y_i on the orthant, with a certifying functional
//! let (m, phi) = m_ratio(&x, &y)?;
//! assert_eq!(m, 2.0);
//! assert!((phi.apply(&x) / phi.apply(&y) - m).abs() <= 1e-10);
//!
//! // Hilbert projective distance log(M(x/y) M(y/x)) = log 4
//! assert!((hilbert(&x, &y)? - 4.0f64.ln()).abs() <= 1e-12);
//! # Ok::<(), conegeo_core::ConeError>(())
//! ```

pub mod cone;
pub mod dynamics;
pub mod error;
pub mod horo;
pub mod jordan;
pub mod maps;
pub mod metrics;
pub mod packed;
pub mod sampling;
pub mod serialize;
pub mod spectral;

pub use cone::{
    interior_gap, is_interior, m_lower, m_ratio, order_unit_norm, ConeDescriptor, ConeKind,
    DualFunctional, Point,
};
pub use error::{ConeError, Result};
pub use jordan::{
    inverse_and_power, jordan_product, quadratic_rep_apply, spectral_decomposition, Algebra,
    JordanElement,
};
pub use maps::{apply, radial_extension, GaugeSpec, MapKind, MapSpec};
pub use metrics::{cross_ratio_hilbert, funk, hilbert, metric_value, rfunk, thompson, MetricKind};
