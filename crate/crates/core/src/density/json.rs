//! JSON density specification consumed by the command-line tool.
//!
//! ```json
//! { "family": "odd_normal_power" | "abs_normal_power" | "custom",
//!   "n": 1, "r": 6.0, "support": "real" | "positive",
//!   "log_expr": { "constant": c, "log_coeff": a, "powers": [[b, mu], ...] } }
//! ```

use serde::{Deserialize, Serialize};

use super::{Density, LogDensityExpr, Support};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    OddNormalPower,
    AbsNormalPower,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportName {
    Real,
    Positive,
}

impl From<SupportName> for Support {
    fn from(s: SupportName) -> Self {
        match s {
            SupportName::Real => Support::RealLine,
            SupportName::Positive => Support::PositiveHalfLine,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogExprSpec {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub log_coeff: f64,
    #[serde(default)]
    pub powers: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_expr: Option<LogExprSpec>,
}

impl DensitySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_density<T: Real>(&self) -> Result<Density<T>> {
        let check_support = |expected: Support| -> Result<()> {
            match self.support {
                Some(s) if Support::from(s) != expected => Err(Error::Spec(format!(
                    "family {:?} lives on {expected:?}",
                    self.family
                ))),
                _ => Ok(()),
            }
        };
        match self.family {
            FamilyName::OddNormalPower => {
                let n = self
                    .n
                    .ok_or_else(|| Error::Spec("odd_normal_power requires \"n\"".into()))?;
                check_support(Support::RealLine)?;
                Density::odd_normal_power(n)
            }
            FamilyName::AbsNormalPower => {
                let r = self
                    .r
                    .ok_or_else(|| Error::Spec("abs_normal_power requires \"r\"".into()))?;
                check_support(Support::PositiveHalfLine)?;
                Density::abs_normal_power(T::lit(r))
            }
            FamilyName::Custom => {
                let support = self
                    .support
                    .ok_or_else(|| Error::Spec("custom density requires \"support\"".into()))?;
                let spec = self
                    .log_expr
                    .as_ref()
                    .ok_or_else(|| Error::Spec("custom density requires \"log_expr\"".into()))?;
                let expr = LogDensityExpr::new(
                    T::lit(spec.constant),
                    T::lit(spec.log_coeff),
                    spec.powers.iter().map(|[b, mu]| (T::lit(*b), T::lit(*mu))),
                )?;
                Ok(Density::from_log_expr(support.into(), expr))
            }
        }
    }
}
