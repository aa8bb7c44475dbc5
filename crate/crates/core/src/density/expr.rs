use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `coeff · |x|^exponent`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm<T> {
    pub coeff: T,
    pub exponent: T,
}

/// Symbolic log-density `c + a·ln|x| + Σ bᵢ·|x|^μᵢ`.
///
/// Power terms are kept sorted by exponent with distinct, nonzero exponents
/// and nonzero coefficients; a zero exponent is folded into the constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogDensityExpr<T> {
    pub constant: T,
    pub log_coeff: T,
    power_terms: Vec<PowerTerm<T>>,
}

impl<T: Real> LogDensityExpr<T> {
    pub fn new<I>(constant: T, log_coeff: T, powers: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, T)>,
    {
        if !constant.is_finite() || !log_coeff.is_finite() {
            return Err(Error::Domain(
                "log-density coefficients must be finite".into(),
            ));
        }
        let mut expr = Self {
            constant,
            log_coeff,
            power_terms: Vec::new(),
        };
        for (coeff, exponent) in powers {
            if !coeff.is_finite() || !exponent.is_finite() {
                return Err(Error::Domain(format!(
                    "power term {coeff}·|x|^{exponent} is not finite"
                )));
            }
            expr.push_term(coeff, exponent);
        }
        Ok(expr)
    }

    pub fn constant(c: T) -> Self {
        Self {
            constant: c,
            log_coeff: T::zero(),
            power_terms: Vec::new(),
        }
    }

    /// `a · ln|x|`
    pub fn log(a: T) -> Self {
        Self {
            constant: T::zero(),
            log_coeff: a,
            power_terms: Vec::new(),
        }
    }

    /// `b · |x|^μ`
    pub fn power(coeff: T, exponent: T) -> Self {
        let mut e = Self::constant(T::zero());
        e.push_term(coeff, exponent);
        e
    }

    pub fn power_terms(&self) -> &[PowerTerm<T>] {
        &self.power_terms
    }

    fn push_term(&mut self, coeff: T, exponent: T) {
        if exponent == T::zero() {
            self.constant = self.constant + coeff;
            return;
        }
        match self
            .power_terms
            .binary_search_by(|p| p.exponent.partial_cmp(&exponent).unwrap())
        {
            Ok(i) => {
                let c = self.power_terms[i].coeff + coeff;
                if c == T::zero() {
                    self.power_terms.remove(i);
                } else {
                    self.power_terms[i].coeff = c;
                }
            }
            Err(i) => {
                if coeff != T::zero() {
                    self.power_terms.insert(i, PowerTerm { coeff, exponent });
                }
            }
        }
    }

    pub fn eval(&self, x: T) -> T {
        let ax = x.abs();
        let mut v = self.constant;
        if self.log_coeff != T::zero() {
            v = v + self.log_coeff * ax.ln();
        }
        for p in &self.power_terms {
            v = v + p.coeff * ax.powf(p.exponent);
        }
        v
    }

    /// `u(x²)`: log coefficient and exponents double.
    pub fn compose_square(&self) -> Self {
        let two = T::lit(2.0);
        Self {
            constant: self.constant,
            log_coeff: two * self.log_coeff,
            power_terms: self
                .power_terms
                .iter()
                .map(|p| PowerTerm {
                    coeff: p.coeff,
                    exponent: two * p.exponent,
                })
                .collect(),
        }
    }

    /// Log-density of the even lift `|x|·f(x²)`.
    pub fn lifted(&self) -> Self {
        let mut e = self.compose_square();
        e.log_coeff = T::one() + e.log_coeff;
        e
    }

    pub fn max_exponent(&self) -> Option<T> {
        self.power_terms.last().map(|p| p.exponent)
    }

    pub fn min_exponent(&self) -> Option<T> {
        self.power_terms.first().map(|p| p.exponent)
    }
}

impl<T: Real> Add for LogDensityExpr<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self.constant = self.constant + rhs.constant;
        self.log_coeff = self.log_coeff + rhs.log_coeff;
        for p in rhs.power_terms {
            self.push_term(p.coeff, p.exponent);
        }
        self
    }
}

impl<T: Real> Mul<T> for LogDensityExpr<T> {
    type Output = Self;

    fn mul(self, k: T) -> Self {
        if k == T::zero() {
            return Self::constant(T::zero());
        }
        Self {
            constant: self.constant * k,
            log_coeff: self.log_coeff * k,
            power_terms: self
                .power_terms
                .into_iter()
                .map(|p| PowerTerm {
                    coeff: p.coeff * k,
                    exponent: p.exponent,
                })
                .collect(),
        }
    }
}

impl<T: Real> Neg for LogDensityExpr<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self * (-T::one())
    }
}
