//! Numerical integration engines: Cauchy principal values by singularity
//! subtraction, improper integrals over the half line and the real line, and
//! the rules they are assembled from.

pub mod accel;
pub mod gauss;
pub mod improper;
pub mod pv;
pub mod tanh_sinh;

use serde::Serialize;

use crate::scalar::Real;

pub use improper::{integrate_improper, integrate_tail, ImproperDomain, ImproperOptions};
pub use pv::{pv_integrate, PvParams};

/// Value of a quadrature together with its error estimate.
///
/// `magnitude` estimates `∫|g|`; convergence is judged relative to
/// `max(1, |value|, magnitude)` so that integrals which cancel to zero from
/// large lobes are assessed against the size of the lobes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub converged: bool,
    /// Set when the partial integrals grow without bound; distinct from a
    /// plain failure to converge.
    pub diverged: bool,
    pub magnitude: T,
}

impl<T: Real> QuadResult<T> {
    pub(crate) fn scale(&self) -> T {
        T::one().max(self.value.abs()).max(self.magnitude)
    }

    /// `abs_error_estimate ≤ rel_tol · max(1, |value|, magnitude)`.
    pub fn meets(&self, rel_tol: T) -> bool {
        self.abs_error_estimate <= rel_tol * self.scale()
    }

    /// Sum of two independent pieces of one integral.
    pub(crate) fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            converged: self.converged && other.converged,
            diverged: self.diverged || other.diverged,
            magnitude: self.magnitude + other.magnitude,
        }
    }

    pub(crate) fn scaled(self, factor: T) -> Self {
        Self {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.abs(),
            converged: self.converged,
            diverged: self.diverged,
            magnitude: self.magnitude * factor.abs(),
        }
    }
}

pub(crate) fn from_tanh_sinh<T: Real>(o: tanh_sinh::TanhSinhOutcome<T>) -> QuadResult<T> {
    QuadResult {
        value: o.value,
        abs_error_estimate: o.error,
        converged: o.converged,
        diverged: false,
        magnitude: o.abs_value,
    }
}

pub(crate) fn from_adaptive<T: Real>(o: gauss::AdaptiveOutcome<T>) -> QuadResult<T> {
    QuadResult {
        value: o.value,
        abs_error_estimate: o.error,
        converged: o.converged,
        diverged: false,
        magnitude: o.abs_value,
    }
}
