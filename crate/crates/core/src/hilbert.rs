//! Hilbert transform `𝓗u(t) = (1/π) PV ∫ (1/(t−x) + x/(1+x²)) u(x) dx` and its
//! half-line variant `𝓗ₑu(t) = 𝓗u*(√t)` with `u*(x) = u(x²)`.
//!
//! The symbolic path covers the term algebra `{c, a·ln|x|, b·|x|^μ}`:
//!
//! | term        | `𝓗`                          | `𝓗ₑ`              |
//! |-------------|------------------------------|-------------------|
//! | `c`         | `0`                          | `0`               |
//! | `a·ln|x|`   | `−aπ/2 · sgn t`              | `−aπ`             |
//! | `b·|x|^μ`   | `−b·tan(μπ/2) · sgn t·|t|^μ` | `−b·tan(μπ)·t^μ`  |
//!
//! valid for `0 < |μ| < 1` (resp. `0 < |2μ| < 1`). Everything else goes
//! through the numeric principal-value path.

use std::ops::{Add, Mul};

use serde::Serialize;

use crate::density::LogDensityExpr;
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_improper, integrate_tail, pv_integrate, ImproperDomain, ImproperOptions, PvParams,
    QuadResult,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// `|t|^μ`
    Even,
    /// `sgn(t)·|t|^μ`
    OddViaSgn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HilbertTerm<T> {
    pub coeff: T,
    pub exponent: T,
    pub parity: Parity,
}

/// `constant + sgn_coeff·sgn(t) + Σ coeff·[sgn(t)]·|t|^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HilbertExpr<T> {
    pub constant: T,
    pub sgn_coeff: T,
    pub power_terms: Vec<HilbertTerm<T>>,
}

impl<T: Real> HilbertExpr<T> {
    pub fn zero() -> Self {
        Self {
            constant: T::zero(),
            sgn_coeff: T::zero(),
            power_terms: Vec::new(),
        }
    }

    /// True when every term carries the sign factor, i.e. the expression is odd.
    pub fn is_odd(&self) -> bool {
        self.constant == T::zero()
            && self
                .power_terms
                .iter()
                .all(|p| p.parity == Parity::OddViaSgn)
    }

    /// Value at `t`; odd terms vanish at `t = 0`.
    pub fn eval(&self, t: T) -> T {
        let at = t.abs();
        let s = t.sgn();
        let mut v = self.constant + self.sgn_coeff * s;
        for p in &self.power_terms {
            match p.parity {
                Parity::Even => v = v + p.coeff * at.powf(p.exponent),
                Parity::OddViaSgn => {
                    if s != T::zero() {
                        v = v + p.coeff * s * at.powf(p.exponent);
                    }
                }
            }
        }
        v
    }

    fn push(&mut self, term: HilbertTerm<T>) {
        if let Some(p) = self
            .power_terms
            .iter_mut()
            .find(|p| p.exponent == term.exponent && p.parity == term.parity)
        {
            p.coeff = p.coeff + term.coeff;
        } else {
            self.power_terms.push(term);
            self.power_terms.sort_by(|a, b| {
                a.exponent
                    .partial_cmp(&b.exponent)
                    .unwrap()
                    .then((a.parity as u8).cmp(&(b.parity as u8)))
            });
        }
        self.power_terms.retain(|p| p.coeff != T::zero());
    }
}

impl<T: Real> Add for HilbertExpr<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self.constant = self.constant + rhs.constant;
        self.sgn_coeff = self.sgn_coeff + rhs.sgn_coeff;
        for p in rhs.power_terms {
            self.push(p);
        }
        self
    }
}

impl<T: Real> Mul<T> for HilbertExpr<T> {
    type Output = Self;

    fn mul(mut self, k: T) -> Self {
        self.constant = self.constant * k;
        self.sgn_coeff = self.sgn_coeff * k;
        for p in &mut self.power_terms {
            p.coeff = p.coeff * k;
        }
        self.power_terms.retain(|p| p.coeff != T::zero());
        self
    }
}

/// Term-by-term `𝓗u` of a symbolic log-density.
pub fn hilbert_symbolic<T: Real>(u: &LogDensityExpr<T>) -> Result<HilbertExpr<T>> {
    let mut out = HilbertExpr::zero();
    out.sgn_coeff = -u.log_coeff * T::FRAC_PI_2();
    for p in u.power_terms() {
        let mu = p.exponent;
        if !(mu.abs() < T::one()) {
            return Err(Error::Unsupported(format!(
                "power |x|^{mu} is outside 0 < |μ| < 1"
            )));
        }
        out.push(HilbertTerm {
            coeff: -p.coeff * (mu * T::FRAC_PI_2()).tan(),
            exponent: mu,
            parity: Parity::OddViaSgn,
        });
    }
    Ok(out)
}

/// Term-by-term `𝓗ₑu` of a symbolic log-density on `ℝ⁺`.
pub fn hilbert_e_symbolic<T: Real>(u: &LogDensityExpr<T>) -> Result<HilbertExpr<T>> {
    let mut out = HilbertExpr::zero();
    out.constant = -u.log_coeff * T::PI();
    for p in u.power_terms() {
        let mu = p.exponent;
        if !((mu + mu).abs() < T::one()) {
            return Err(Error::Unsupported(format!(
                "power x^{mu} is outside 0 < |2μ| < 1"
            )));
        }
        out.push(HilbertTerm {
            coeff: -p.coeff * (mu * T::PI()).tan(),
            exponent: mu,
            parity: Parity::Even,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// `u(-x) = u(x)`: the reduced kernel `(2t/π) PV ∫₀^∞ u(x)/(t²−x²) dx` applies.
    Even,
    General,
}

/// Numeric `𝓗u` for a fixed `u`, checked once for `∫|u|/(1+x²) < ∞`.
///
/// Non-finite values of `u` (zeros of the density under a logarithm) are
/// excluded from every integral.
pub struct NumericHilbert<U> {
    u: U,
    symmetry: Symmetry,
}

impl<U> NumericHilbert<U> {
    pub fn new<T>(u: U, symmetry: Symmetry) -> Result<Self>
    where
        T: Real,
        U: Fn(T) -> T,
    {
        let weighted = |x: T| {
            let v = u(x);
            if v.is_finite() {
                v.abs() / (T::one() + x * x)
            } else {
                T::zero()
            }
        };
        let opts = ImproperOptions::new(T::lit(1e-6));
        let check = integrate_improper(&weighted, ImproperDomain::RealLine, &opts);
        if check.diverged || !check.value.is_finite() {
            return Err(Error::Domain(
                "∫|u(x)|/(1+x²) dx diverges; the Hilbert transform is undefined".into(),
            ));
        }
        Ok(Self { u, symmetry })
    }

    /// Skips the integrability check; the caller vouches for `u`.
    pub(crate) fn unchecked(u: U, symmetry: Symmetry) -> Self {
        Self { u, symmetry }
    }

    pub fn eval<T>(&self, t: T, params: &PvParams<T>) -> Result<QuadResult<T>>
    where
        T: Real,
        U: Fn(T) -> T,
    {
        params.validate(t)?;
        if !t.is_finite() {
            return Err(Error::Domain(format!("cannot evaluate at t = {t}")));
        }
        let u = |x: T| {
            let v = (self.u)(x);
            if v.is_finite() {
                v
            } else {
                T::zero()
            }
        };
        let res = match self.symmetry {
            Symmetry::Even => even_transform(&u, t, params)?,
            Symmetry::General => general_transform(&u, t, params)?,
        };
        if !res.converged {
            return Err(Error::Accuracy {
                estimate: res.value.as_f64(),
                error: res.abs_error_estimate.as_f64(),
            });
        }
        Ok(res)
    }
}

fn even_transform<T: Real, U: Fn(T) -> T>(
    u: &U,
    t: T,
    params: &PvParams<T>,
) -> Result<QuadResult<T>> {
    if t == T::zero() {
        return Ok(QuadResult {
            value: T::zero(),
            abs_error_estimate: T::zero(),
            converged: true,
            diverged: false,
            magnitude: T::zero(),
        });
    }
    let s = t.abs();
    let big_x = params.tail_cutoff;
    let g = |x: T| u(x) / (s + x);
    let pv = pv_integrate(&g, s, T::zero(), big_x, params)?;
    let tail_fn = |x: T| u(x) / ((s - x) * (s + x));
    let tail = integrate_tail(&tail_fn, big_x, params.target_rel_tol * T::lit(0.1));
    let mut res = pv.combine(tail).scaled(T::lit(2.0) * s / T::PI());
    res.converged = res.converged && res.meets(params.target_rel_tol);
    if t < T::zero() {
        res.value = -res.value;
    }
    Ok(res)
}

fn general_transform<T: Real, U: Fn(T) -> T>(
    u: &U,
    t: T,
    params: &PvParams<T>,
) -> Result<QuadResult<T>> {
    let big_x = params.tail_cutoff;
    let tol = params.target_rel_tol;

    let pv = if t == T::zero() {
        pv_integrate(u, t, -big_x, big_x, params)?
    } else {
        // u may be singular at the origin, so the two sides are kept apart.
        let left = pv_integrate(u, t, -big_x, T::zero(), params)?;
        let right = pv_integrate(u, t, T::zero(), big_x, params)?;
        left.combine(right)
    };

    let regularizer = |x: T| x * u(x) / (T::one() + x * x);
    let reg_r = crate::quadrature::from_tanh_sinh(crate::quadrature::tanh_sinh::tanh_sinh(
        &regularizer,
        T::zero(),
        big_x,
        T::zero(),
        tol * T::lit(0.1),
    ));
    let reg_l = crate::quadrature::from_tanh_sinh(crate::quadrature::tanh_sinh::tanh_sinh(
        &regularizer,
        -big_x,
        T::zero(),
        T::zero(),
        tol * T::lit(0.1),
    ));

    // 1/(t−x) + x/(1+x²) = (1 + t x)/((t − x)(1 + x²))
    let kernel = |x: T| (T::one() + t * x) / ((t - x) * (T::one() + x * x));
    let tail_r = integrate_tail(&|x: T| u(x) * kernel(x), big_x, tol * T::lit(0.1));
    let tail_l = integrate_tail(&|x: T| u(-x) * kernel(-x), big_x, tol * T::lit(0.1));

    let mut res = pv
        .combine(reg_r)
        .combine(reg_l)
        .combine(tail_r)
        .combine(tail_l)
        .scaled(T::FRAC_1_PI());
    res.converged = res.converged && res.meets(tol);
    Ok(res)
}

/// `𝓗u(t)` by principal-value quadrature.
pub fn hilbert_numeric<T, U>(
    u: U,
    t: T,
    symmetry: Symmetry,
    params: &PvParams<T>,
) -> Result<QuadResult<T>>
where
    T: Real,
    U: Fn(T) -> T,
{
    NumericHilbert::new(u, symmetry)?.eval(t, params)
}

/// `𝓗ₑu(t) = 𝓗u*(√t)` for `u` on `ℝ⁺`, `t > 0`. `params` refer to the point `√t`.
pub fn hilbert_e_numeric<T, U>(u: U, t: T, params: &PvParams<T>) -> Result<QuadResult<T>>
where
    T: Real,
    U: Fn(T) -> T,
{
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("𝓗ₑ is defined for t > 0, got {t}")));
    }
    let lifted = move |x: T| u(x * x);
    hilbert_numeric(lifted, t.sqrt(), Symmetry::Even, params)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck<T> {
    pub t: T,
    pub symbolic: T,
    pub numeric: Option<T>,
    pub error_estimate: Option<T>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation<T> {
    pub tolerance: T,
    pub entries: Vec<CrossCheck<T>>,
    pub pass: bool,
}

impl<T: Real> CrossValidation<T> {
    pub fn failures(&self) -> impl Iterator<Item = &CrossCheck<T>> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn max_abs_diff(&self) -> T {
        self.entries
            .iter()
            .filter_map(|e| e.numeric.map(|n| (n - e.symbolic).abs()))
            .fold(T::zero(), T::max)
    }
}

fn compare<T: Real>(
    grid: &[T],
    tol: T,
    symbolic: impl Fn(T) -> T,
    numeric: impl Fn(T) -> Result<QuadResult<T>>,
) -> CrossValidation<T> {
    let entries: Vec<CrossCheck<T>> = grid
        .iter()
        .map(|&t| {
            let s = symbolic(t);
            match numeric(t) {
                Ok(q) => CrossCheck {
                    t,
                    symbolic: s,
                    numeric: Some(q.value),
                    error_estimate: Some(q.abs_error_estimate),
                    pass: (q.value - s).abs() <= tol * T::one().max(s.abs()),
                },
                Err(_) => CrossCheck {
                    t,
                    symbolic: s,
                    numeric: None,
                    error_estimate: None,
                    pass: false,
                },
            }
        })
        .collect();
    let pass = entries.iter().all(|e| e.pass);
    CrossValidation {
        tolerance: tol,
        entries,
        pass,
    }
}

/// Compares the symbolic and numeric `𝓗u` on `grid`:
/// `|symbolic − numeric| ≤ tol·max(1, |symbolic|)` at every point.
pub fn cross_validate<T: Real>(
    u: &LogDensityExpr<T>,
    grid: &[T],
    tol: T,
) -> Result<CrossValidation<T>> {
    let sym = hilbert_symbolic(u)?;
    let num = NumericHilbert::new(|x: T| u.eval(x), Symmetry::Even)?;
    Ok(compare(
        grid,
        tol,
        |t| sym.eval(t),
        |t| num.eval(t, &PvParams::for_point(t)),
    ))
}

/// Same comparison for `𝓗ₑ` on a grid of positive points.
pub fn cross_validate_e<T: Real>(
    u: &LogDensityExpr<T>,
    grid: &[T],
    tol: T,
) -> Result<CrossValidation<T>> {
    if let Some(t) = grid.iter().find(|t| !(**t > T::zero())) {
        return Err(Error::Domain(format!("𝓗ₑ grid point {t} is not positive")));
    }
    let sym = hilbert_e_symbolic(u)?;
    let num = NumericHilbert::new(|x: T| u.eval(x * x), Symmetry::Even)?;
    Ok(compare(
        grid,
        tol,
        |t| sym.eval(t),
        |t| {
            let s = t.sqrt();
            num.eval(s, &PvParams::for_point(s))
        },
    ))
}
