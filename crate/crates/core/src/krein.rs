//! Logarithmic-integral conditions:
//! `∫_ℝ −ln f(x)/(1+x²) dx < ∞` on the real line and
//! `∫₀^∞ −ln f(x²)/(1+x²) dx < ∞` on the half line.
//!
//! A `Divergent` verdict says only that the condition fails; it does not
//! imply the moment problem is determinate.

use std::cell::Cell;
use std::fmt::Write as _;

use serde::Serialize;

use crate::density::{Density, LogDensityExpr, Support};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_improper, ImproperDomain, ImproperOptions, QuadResult};
use crate::scalar::Real;

const KREIN_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KreinStatus {
    Finite,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KreinMethod {
    /// Tail analysis of the symbolic log-density; value by quadrature.
    Symbolic,
    /// Quadrature with the divergence heuristic only.
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KreinVerdict<T> {
    pub status: KreinStatus,
    pub value: Option<T>,
    pub method: KreinMethod,
    pub diagnostics: String,
}

impl<T> KreinVerdict<T> {
    pub fn is_finite(&self) -> bool {
        self.status == KreinStatus::Finite
    }
}

/// Checks the real-line condition, symbolically when `f` has a log-density expression.
pub fn krein_check_real<T: Real>(f: &Density<T>) -> Result<KreinVerdict<T>> {
    let method = if f.log_expr().is_some() {
        KreinMethod::Symbolic
    } else {
        KreinMethod::Numeric
    };
    krein_check_real_with(f, method)
}

pub fn krein_check_real_with<T: Real>(
    f: &Density<T>,
    method: KreinMethod,
) -> Result<KreinVerdict<T>> {
    f.support().expect(Support::RealLine)?;
    check(f, method, Condition::RealLine)
}

/// Checks the half-line condition, symbolically when `f` has a log-density expression.
pub fn krein_check_halfline<T: Real>(f: &Density<T>) -> Result<KreinVerdict<T>> {
    let method = if f.log_expr().is_some() {
        KreinMethod::Symbolic
    } else {
        KreinMethod::Numeric
    };
    krein_check_halfline_with(f, method)
}

pub fn krein_check_halfline_with<T: Real>(
    f: &Density<T>,
    method: KreinMethod,
) -> Result<KreinVerdict<T>> {
    f.support().expect(Support::PositiveHalfLine)?;
    check(f, method, Condition::HalfLine)
}

#[derive(Clone, Copy)]
enum Condition {
    RealLine,
    HalfLine,
}

impl Condition {
    fn domain(self) -> ImproperDomain {
        match self {
            Condition::RealLine => ImproperDomain::RealLine,
            Condition::HalfLine => ImproperDomain::HalfLine,
        }
    }

    /// Point at which `ln f` is sampled for integration variable `x`.
    fn argument<T: Real>(self, x: T) -> T {
        match self {
            Condition::RealLine => x,
            Condition::HalfLine => x * x,
        }
    }
}

fn check<T: Real>(f: &Density<T>, method: KreinMethod, cond: Condition) -> Result<KreinVerdict<T>> {
    match (method, f.log_expr()) {
        (KreinMethod::Symbolic, Some(u)) => symbolic(u, cond),
        (KreinMethod::Symbolic, None) => Err(Error::Precondition(
            "symbolic Krein check needs a log-density expression".into(),
        )),
        (KreinMethod::Numeric, _) => numeric(f, cond),
    }
}

/// `|x|^μ/(1+x²)` is integrable on `ℝ` iff `−1 < μ < 1`; logarithms and
/// constants always are. On the half line `ln f(x²)` carries exponents `2μ`.
fn symbolic<T: Real>(u: &LogDensityExpr<T>, cond: Condition) -> Result<KreinVerdict<T>> {
    let effective = match cond {
        Condition::RealLine => u.clone(),
        Condition::HalfLine => u.compose_square(),
    };
    let mut diagnostics = String::new();
    let mut divergent = false;
    for p in effective.power_terms() {
        let mu = p.exponent;
        if mu >= T::one() {
            divergent = true;
            let _ = write!(
                diagnostics,
                "term {}·|x|^{}: exponent >= 1, ∫|x|^μ/(1+x²) diverges at infinity; ",
                p.coeff, mu
            );
        } else if mu <= -T::one() {
            divergent = true;
            let _ = write!(
                diagnostics,
                "term {}·|x|^{}: exponent <= -1, not integrable at the origin; ",
                p.coeff, mu
            );
        } else {
            let _ = write!(diagnostics, "term |x|^{mu}: integrable; ");
        }
    }
    if divergent {
        return Ok(KreinVerdict {
            status: KreinStatus::Divergent,
            value: None,
            method: KreinMethod::Symbolic,
            diagnostics: diagnostics.trim_end().to_string(),
        });
    }
    let value = closed_form(&effective, cond);
    let integrand = |x: T| -effective.eval(x) / (T::one() + x * x);
    let q = integrate_improper(
        &integrand,
        cond.domain(),
        &ImproperOptions::new(T::lit(KREIN_REL_TOL)),
    );
    let _ = write!(diagnostics, "logarithmic integral {value} (closed form); ");
    if q.converged {
        let _ = write!(
            diagnostics,
            "quadrature {} ± {}",
            q.value, q.abs_error_estimate
        );
        let scale = T::one().max(value.abs());
        if (q.value - value).abs() > q.abs_error_estimate + T::lit(1e-8) * scale {
            log::warn!("closed form {value} and quadrature {} disagree", q.value);
        }
    } else {
        let _ = write!(
            diagnostics,
            "quadrature did not converge (slowly decaying tail)"
        );
    }
    Ok(KreinVerdict {
        status: KreinStatus::Finite,
        value: Some(value),
        method: KreinMethod::Symbolic,
        diagnostics,
    })
}

/// `∫ −u(x)/(1+x²) dx` term by term: `∫ dx/(1+x²) = π`, `∫ ln|x|/(1+x²) = 0`,
/// `∫ |x|^μ/(1+x²) = π/cos(μπ/2)` for `|μ| < 1`; halved on `[0, ∞)`.
fn closed_form<T: Real>(u: &LogDensityExpr<T>, cond: Condition) -> T {
    let pi = T::PI();
    let powers = u.power_terms().iter().fold(T::zero(), |acc, p| {
        acc + p.coeff * pi / (p.exponent * pi / T::lit(2.0)).cos()
    });
    let full = -(u.constant * pi + powers);
    match cond {
        Condition::RealLine => full,
        Condition::HalfLine => full / T::lit(2.0),
    }
}

fn finite_or_inconclusive<T: Real>(
    q: QuadResult<T>,
    method: KreinMethod,
    diagnostics: String,
) -> KreinVerdict<T> {
    if q.converged {
        KreinVerdict {
            status: KreinStatus::Finite,
            value: Some(q.value),
            method,
            diagnostics,
        }
    } else {
        KreinVerdict {
            status: KreinStatus::Inconclusive,
            value: None,
            method,
            diagnostics,
        }
    }
}

fn numeric<T: Real>(f: &Density<T>, cond: Condition) -> Result<KreinVerdict<T>> {
    let vanishing: Cell<Option<T>> = Cell::new(None);
    // With an expression, ln f(x²) is evaluated directly so that x² cannot overflow.
    let composed = match (cond, f.log_expr()) {
        (Condition::HalfLine, Some(u)) => Some(u.compose_square()),
        _ => None,
    };
    let integrand = |x: T| {
        let y = cond.argument(x);
        let l = match &composed {
            Some(u) => u.eval(x),
            None if !y.is_finite() => return T::zero(),
            None => f.ln_eval(y),
        };
        if l == T::neg_infinity() || l.is_nan() {
            if vanishing.get().is_none() {
                vanishing.set(Some(y));
            }
            return T::zero();
        }
        -l / (T::one() + x * x)
    };
    let q = integrate_improper(
        &integrand,
        cond.domain(),
        &ImproperOptions::new(T::lit(KREIN_REL_TOL)),
    );
    if let Some(x) = vanishing.get() {
        return Err(Error::Domain(format!(
            "density vanishes at x = {x}; ln f is undefined there"
        )));
    }

    let mut diagnostics = String::from("cutoff growth:");
    let mut prev = T::zero();
    for j in 0..6 {
        let cutoff = T::lit(10.0) * T::lit(2.0).powi(j * 4);
        let partial = partial_integral(&integrand, cond, cutoff);
        let _ = write!(
            diagnostics,
            " X={cutoff}: {partial} (Δ={});",
            partial - prev
        );
        prev = partial;
    }
    let _ = write!(diagnostics, " total {} ± {}", q.value, q.abs_error_estimate);

    if q.diverged {
        return Ok(KreinVerdict {
            status: KreinStatus::Divergent,
            value: None,
            method: KreinMethod::Numeric,
            diagnostics,
        });
    }
    Ok(finite_or_inconclusive(q, KreinMethod::Numeric, diagnostics))
}

fn partial_integral<T: Real, G: Fn(T) -> T>(g: &G, cond: Condition, cutoff: T) -> T {
    use crate::quadrature::tanh_sinh::tanh_sinh;
    let tol = T::lit(1e-8);
    let right = tanh_sinh(g, T::zero(), cutoff, T::zero(), tol).value;
    match cond {
        Condition::HalfLine => right,
        Condition::RealLine => right + tanh_sinh(g, -cutoff, T::zero(), T::zero(), tol).value,
    }
}
