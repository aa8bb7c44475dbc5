//! Densities on `ℝ` and `ℝ⁺`, their symbolic log-densities, closed-form
//! moments and the half-line to real-line lift `f*(x) = |x| f(x²)`.

mod expr;
mod json;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_improper, ImproperDomain, ImproperOptions, QuadResult};
use crate::scalar::Real;

pub use expr::{LogDensityExpr, PowerTerm};
pub use json::{DensitySpec, FamilyName, LogExprSpec, SupportName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Support {
    RealLine,
    PositiveHalfLine,
}

impl Support {
    pub fn quadrature_domain(self) -> ImproperDomain {
        match self {
            Support::RealLine => ImproperDomain::RealLine,
            Support::PositiveHalfLine => ImproperDomain::HalfLine,
        }
    }

    pub fn expect(self, expected: Support) -> Result<()> {
        if self == expected {
            Ok(())
        } else {
            Err(Error::SupportMismatch {
                expected,
                found: self,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T> {
    /// Density of `X^{2n+1}` for `X ~ N(0, 1/2)`.
    OddNormalPower(u32),
    /// Density of `|X|^r` for `X ~ N(0, 1/2)`.
    AbsNormalPower(T),
    Custom,
}

pub type DensityFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A probability density with its support and, when known, a symbolic
/// log-density. Immutable once built; cloning shares the evaluator.
#[derive(Clone)]
pub struct Density<T> {
    support: Support,
    eval: DensityFn<T>,
    log_expr: Option<LogDensityExpr<T>>,
    family: Family<T>,
}

impl<T: Real> fmt::Debug for Density<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("support", &self.support)
            .field("family", &self.family)
            .field("log_expr", &self.log_expr)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Density<T> {
    /// Builds a family member; `Family::Custom` is rejected here.
    pub fn make_family(family: Family<T>) -> Result<Self> {
        match family {
            Family::OddNormalPower(n) => Self::odd_normal_power(n),
            Family::AbsNormalPower(r) => Self::abs_normal_power(r),
            Family::Custom => Err(Error::Domain(
                "custom densities are built with Density::custom".into(),
            )),
        }
    }

    /// `f_n(x) = |x|^{-2n/(2n+1)} exp(-|x|^{2/(2n+1)}) / ((2n+1)√π)` on `ℝ`.
    pub fn odd_normal_power(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain(format!(
                "odd normal power needs n >= 1, got {n}"
            )));
        }
        let m = T::lit(2.0 * n as f64 + 1.0);
        let sqrt_pi = T::PI().sqrt();
        let norm = T::one() / (m * sqrt_pi);
        let p = T::lit(2.0 * n as f64) / m;
        let q = T::lit(2.0) / m;
        let eval = move |x: T| {
            let ax = x.abs();
            norm * ax.powf(-p) * (-ax.powf(q)).exp()
        };
        let log_expr = LogDensityExpr::new(-(m * sqrt_pi).ln(), -p, [(-T::one(), q)])?;
        Ok(Self {
            support: Support::RealLine,
            eval: Arc::new(eval),
            log_expr: Some(log_expr),
            family: Family::OddNormalPower(n),
        })
    }

    /// `f_r(x) = 2/(r√π) x^{1/r-1} exp(-x^{2/r})` on `ℝ⁺`.
    pub fn abs_normal_power(r: T) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::Domain(format!(
                "abs normal power needs r > 0, got {r}"
            )));
        }
        let sqrt_pi = T::PI().sqrt();
        let norm = T::lit(2.0) / (r * sqrt_pi);
        let a = T::one() / r - T::one();
        let q = T::lit(2.0) / r;
        let eval = move |x: T| {
            if x < T::zero() {
                T::zero()
            } else {
                norm * x.powf(a) * (-x.powf(q)).exp()
            }
        };
        let log_expr = LogDensityExpr::new(norm.ln(), a, [(-T::one(), q)])?;
        Ok(Self {
            support: Support::PositiveHalfLine,
            eval: Arc::new(eval),
            log_expr: Some(log_expr),
            family: Family::AbsNormalPower(r),
        })
    }

    /// User-supplied density. `log_expr`, when given, must describe `ln eval`.
    pub fn custom<F>(eval: F, support: Support, log_expr: Option<LogDensityExpr<T>>) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            support,
            eval: Arc::new(eval),
            log_expr,
            family: Family::Custom,
        }
    }

    /// Density `exp(u(x))` for a symbolic log-density `u`.
    pub fn from_log_expr(support: Support, log_expr: LogDensityExpr<T>) -> Self {
        let u = log_expr.clone();
        let half_line = support == Support::PositiveHalfLine;
        let eval = move |x: T| {
            if half_line && x < T::zero() {
                T::zero()
            } else {
                u.eval(x).exp()
            }
        };
        Self::custom(eval, support, Some(log_expr))
    }

    /// `N(0, 1/2)`, density `exp(-x²)/√π`.
    pub fn half_variance_normal() -> Self {
        let expr = LogDensityExpr::new(-T::PI().sqrt().ln(), T::zero(), [(-T::one(), T::lit(2.0))])
            .expect("finite coefficients");
        Self::from_log_expr(Support::RealLine, expr)
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn family(&self) -> Family<T> {
        self.family
    }

    pub fn log_expr(&self) -> Option<&LogDensityExpr<T>> {
        self.log_expr.as_ref()
    }

    pub fn eval(&self, x: T) -> T {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> DensityFn<T> {
        Arc::clone(&self.eval)
    }

    /// `ln f(x)`, from the symbolic expression when available.
    pub fn ln_eval(&self, x: T) -> T {
        match &self.log_expr {
            Some(u) => u.eval(x),
            None => self.eval(x).ln(),
        }
    }

    /// True when `f(-x) = f(x)` is known structurally.
    pub fn is_even(&self) -> bool {
        self.support == Support::RealLine
            && (self.log_expr.is_some() || matches!(self.family, Family::OddNormalPower(_)))
    }

    /// `∫ f` over the support.
    pub fn normalization(&self, rel_tol: T) -> QuadResult<T> {
        let f = |x: T| self.eval(x);
        integrate_improper(
            &f,
            self.support.quadrature_domain(),
            &ImproperOptions::new(rel_tol),
        )
    }
}

/// Closed-form moment `∫ x^k f`, available for the built-in families.
///
/// Uses `E|X|^p = Γ((p+1)/2)/√π` for `X ~ N(0, 1/2)`.
pub fn moment_closed_form<T: Real>(d: &Density<T>, k: u32) -> Option<T> {
    let half_normal_abs = |p: f64| gamma((p + 1.0) / 2.0) / std::f64::consts::PI.sqrt();
    match d.family {
        Family::OddNormalPower(n) => {
            if k % 2 == 1 {
                Some(T::zero())
            } else {
                Some(T::lit(half_normal_abs((2.0 * n as f64 + 1.0) * k as f64)))
            }
        }
        Family::AbsNormalPower(r) => Some(T::lit(half_normal_abs(r.as_f64() * k as f64))),
        Family::Custom => None,
    }
}

/// `∫ x^k f` by improper quadrature, independent of any closed form.
pub fn moment_by_quadrature<T: Real>(d: &Density<T>, k: u32, rel_tol: T) -> QuadResult<T> {
    let g = |x: T| {
        let v = d.eval(x);
        if v == T::zero() {
            T::zero()
        } else {
            x.powi(k as i32) * v
        }
    };
    integrate_improper(
        &g,
        d.support.quadrature_domain(),
        &ImproperOptions::new(rel_tol),
    )
}

const MOMENT_REL_TOL: f64 = 1e-10;

/// Moment of order `k`: closed form for family densities, quadrature otherwise.
pub fn moment<T: Real>(d: &Density<T>, k: u32) -> Result<T> {
    if let Some(m) = moment_closed_form(d, k) {
        return Ok(m);
    }
    let q = moment_by_quadrature(d, k, T::lit(MOMENT_REL_TOL));
    if q.converged && q.meets(T::lit(1e-8)) {
        Ok(q.value)
    } else {
        Err(Error::Accuracy {
            estimate: q.value.as_f64(),
            error: q.abs_error_estimate.as_f64(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSequence<T> {
    pub orders: Vec<u32>,
    pub values: Vec<T>,
    pub method: MomentMethod,
}

pub fn moment_sequence<T: Real>(d: &Density<T>, orders: &[u32]) -> Result<MomentSequence<T>> {
    let method = if moment_closed_form(d, 0).is_some() {
        MomentMethod::ClosedForm
    } else {
        MomentMethod::Quadrature
    };
    let values = orders
        .iter()
        .map(|&k| moment(d, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentSequence {
        orders: orders.to_vec(),
        values,
        method,
    })
}

/// `f*(x) = |x| f(x²)`, an even density on `ℝ` whose moment of order `2k`
/// equals the moment of order `k` of `f`.
pub fn lift_to_real_line<T: Real>(d: &Density<T>) -> Result<Density<T>> {
    d.support.expect(Support::PositiveHalfLine)?;
    let log_expr = d.log_expr.as_ref().map(LogDensityExpr::lifted);
    // With an expression, exp(ln f*(x)) avoids forming x², which underflows
    // near the origin and overflows far out.
    let eval: DensityFn<T> = match &log_expr {
        Some(u) => {
            let u = u.clone();
            Arc::new(move |x: T| u.eval(x).exp())
        }
        None => {
            let inner = d.evaluator();
            Arc::new(move |x: T| x.abs() * inner(x * x))
        }
    };
    Ok(Density {
        support: Support::RealLine,
        eval,
        log_expr,
        family: Family::Custom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn odd_normal_power_log_expr() {
        let d = Density::<f64>::odd_normal_power(1).unwrap();
        let u = d.log_expr().unwrap();
        assert_relative_eq!(u.log_coeff, -2.0 / 3.0);
        assert_eq!(u.power_terms().len(), 1);
        assert_relative_eq!(u.power_terms()[0].coeff, -1.0);
        assert_relative_eq!(u.power_terms()[0].exponent, 2.0 / 3.0);
        assert_relative_eq!(u.constant, -(3.0 * std::f64::consts::PI.sqrt()).ln());
        assert_eq!(d.support(), Support::RealLine);
    }

    #[test]
    fn abs_normal_power_log_expr() {
        let d = Density::<f64>::abs_normal_power(2.0).unwrap();
        let u = d.log_expr().unwrap();
        assert_relative_eq!(u.log_coeff, -0.5);
        assert_eq!(
            u.power_terms(),
            &[PowerTerm {
                coeff: -1.0,
                exponent: 1.0
            }]
        );
        assert_eq!(d.support(), Support::PositiveHalfLine);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            Density::<f64>::abs_normal_power(0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            Density::<f64>::abs_normal_power(-1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            Density::<f64>::odd_normal_power(0),
            Err(Error::Domain(_))
        ));
        assert!(Density::<f64>::make_family(Family::Custom).is_err());
    }

    #[test]
    fn odd_moments_vanish_exactly() {
        let d = Density::<f64>::odd_normal_power(1).unwrap();
        for k in [1, 3, 5, 7] {
            assert_eq!(moment(&d, k).unwrap(), 0.0);
        }
        let seq = moment_sequence(&d, &[0, 1, 2]).unwrap();
        assert_eq!(seq.method, MomentMethod::ClosedForm);
        assert_eq!(seq.values[1], 0.0);
    }

    #[test]
    fn lift_rejects_real_line() {
        let d = Density::<f64>::odd_normal_power(2).unwrap();
        assert!(matches!(
            lift_to_real_line(&d),
            Err(Error::SupportMismatch { .. })
        ));
    }

    #[test]
    fn lifted_log_expr_of_abs_normal_power() {
        for r in [2.0, 5.0, 6.0] {
            let d = Density::<f64>::abs_normal_power(r).unwrap();
            let l = lift_to_real_line(&d).unwrap();
            let u = l.log_expr().unwrap();
            assert_relative_eq!(u.log_coeff, 2.0 / r - 1.0, epsilon = 1e-15);
            assert_relative_eq!(u.power_terms()[0].exponent, 4.0 / r);
            assert_eq!(u.power_terms()[0].coeff, -1.0);
            for i in 1..200 {
                let x = -5.0 + 0.05 * i as f64 + 0.001;
                let direct = x.abs() * d.eval(x * x);
                assert_relative_eq!(l.eval(x), direct);
                assert_relative_eq!(u.eval(x).exp(), direct, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn single_precision_family() {
        let d = Density::<f32>::abs_normal_power(6.0).unwrap();
        let m = moment(&d, 1).unwrap();
        // Γ(7/2)/√π = 5/2 · 3/2 · 1/2
        assert!((m - 1.875).abs() < 1e-5, "{m}");
    }
}
