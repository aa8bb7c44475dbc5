//! Cauchy principal values `PV ∫_a^b g(x)/(t − x) dx` by singularity subtraction.
//!
//! Writing `g(x) = g(t) + (g(x) − g(t))`, the constant part has the closed
//! form `g(t) · ln((t − a)/(b − t))` and the remainder `(g(x) − g(t))/(t − x)`
//! is regular at `x = t`. The remainder is integrated with composite
//! Gauss–Legendre panels on the symmetric excision `|x − t| ≤ δ` and with
//! tanh-sinh outside it, which also absorbs integrable singularities of `g`
//! at the interval ends.

use log::trace;

use super::gauss::GaussLegendre;
use super::tanh_sinh::tanh_sinh;
use super::{from_tanh_sinh, QuadResult};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_INNER_PANELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvParams<T> {
    /// Half-width `δ` of the symmetric region around the singularity.
    pub excision_radius: T,
    /// Gauss nodes per panel inside the excision region.
    pub panel_order: usize,
    /// Truncation point `X_max`; beyond it callers integrate a regular tail.
    pub tail_cutoff: T,
    pub target_rel_tol: T,
}

impl<T: Real> PvParams<T> {
    /// δ = 1e-3·max(1,|t|), 32-point panels, X_max = 4·max(1,|t|), tolerance 1e-9.
    pub fn for_point(t: T) -> Self {
        let scale = T::one().max(t.abs());
        Self {
            excision_radius: T::lit(1e-3) * scale,
            panel_order: 32,
            tail_cutoff: T::lit(4.0) * scale,
            target_rel_tol: T::lit(1e-9),
        }
    }

    pub fn validate(&self, t: T) -> Result<()> {
        if !(self.excision_radius > T::zero()) {
            return Err(Error::Domain("excision radius must be positive".into()));
        }
        if self.panel_order < 8 {
            return Err(Error::Domain(format!(
                "panel order {} is below the minimum of 8",
                self.panel_order
            )));
        }
        let bound = T::one().max(T::lit(2.0) * t.abs());
        if !(self.tail_cutoff > bound) {
            return Err(Error::Domain(format!(
                "tail cutoff {} must exceed max(1, 2|t|) = {}",
                self.tail_cutoff, bound
            )));
        }
        if !(self.target_rel_tol > T::zero()) {
            return Err(Error::Domain("target tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// `PV ∫_a^b g(x)/(t − x) dx`.
///
/// When `t` lies outside `[a, b]` this is an ordinary integral. `t` equal to an
/// endpoint is rejected. Only `excision_radius`, `panel_order` and
/// `target_rel_tol` of `params` are used here.
pub fn pv_integrate<T: Real, G: Fn(T) -> T>(
    g: &G,
    t: T,
    a: T,
    b: T,
    params: &PvParams<T>,
) -> Result<QuadResult<T>> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    if !(params.excision_radius > T::zero()) || params.panel_order < 8 {
        return Err(Error::Domain("invalid principal-value parameters".into()));
    }
    let tol = params.target_rel_tol;
    if t < a || t > b {
        let kernel = |x: T| g(x) / (t - x);
        let out = tanh_sinh(&kernel, a, b, T::zero(), tol * T::lit(0.1));
        let mut res = from_tanh_sinh(out);
        res.converged = res.converged && res.meets(tol);
        return Ok(res);
    }
    if t == a || t == b {
        return Err(Error::Domain(format!(
            "singular point {t} lies on the boundary of [{a}, {b}]"
        )));
    }
    let gt = g(t);
    if !gt.is_finite() {
        return Err(Error::Domain(format!(
            "integrand is not finite at the singular point {t}"
        )));
    }

    let remainder = |x: T| (g(x) - gt) / (t - x);
    let d = params.excision_radius.min(t - a).min(b - t);

    let rule = GaussLegendre::new(params.panel_order);
    let inner_left = composite_gauss(&rule, &remainder, t - d, t, tol);
    let inner_right = composite_gauss(&rule, &remainder, t, t + d, tol);

    let mut total = inner_left.combine(inner_right);
    if t - d > a {
        let o = tanh_sinh(&remainder, a, t - d, T::zero(), tol * T::lit(0.1));
        total = total.combine(from_tanh_sinh(o));
    }
    if t + d < b {
        let o = tanh_sinh(&remainder, t + d, b, T::zero(), tol * T::lit(0.1));
        total = total.combine(from_tanh_sinh(o));
    }

    let analytic = if (t - a) == (b - t) {
        T::zero()
    } else {
        gt * ((t - a) / (b - t)).ln()
    };
    total.value = total.value + analytic;
    total.magnitude = total.magnitude + analytic.abs();
    total.converged = total.converged && total.meets(tol);
    trace!(
        "pv t={} [{}, {}] value={} err={}",
        t,
        a,
        b,
        total.value,
        total.abs_error_estimate
    );
    Ok(total)
}

/// Composite Gauss on `[a, b]`, doubling the panel count until two
/// successive refinements agree.
fn composite_gauss<T: Real, F: Fn(T) -> T>(
    rule: &GaussLegendre<T>,
    f: &F,
    a: T,
    b: T,
    rel_tol: T,
) -> QuadResult<T> {
    let run = |panels: usize| {
        let h = (b - a) / T::from_usize(panels).unwrap();
        (0..panels).fold((T::zero(), T::zero()), |(s, m), i| {
            let lo = a + h * T::from_usize(i).unwrap();
            let (v, av) = rule.integrate(f, lo, lo + h);
            (s + v, m + av)
        })
    };
    let (mut coarse, _) = run(1);
    let mut panels = 2;
    loop {
        let (fine, mag) = run(panels);
        let err = (fine - coarse).abs();
        let floor = T::lit(50.0) * T::epsilon() * mag;
        let ok = err <= rel_tol * T::lit(0.1) * T::one().max(mag);
        if ok || panels >= MAX_INNER_PANELS || !fine.is_finite() {
            return QuadResult {
                value: fine,
                abs_error_estimate: err.max(floor),
                converged: ok && fine.is_finite(),
                diverged: false,
                magnitude: mag,
            };
        }
        coarse = fine;
        panels *= 2;
    }
}
