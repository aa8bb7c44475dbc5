use clap::{Args, ValueEnum};
use krein_core::{Density, DensitySpec};

use crate::failure::{Failure, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    OddNormalPower,
    AbsNormalPower,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Density spec: a JSON file, or inline JSON starting with '{'.
    #[arg(long, conflicts_with = "family")]
    pub spec: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Odd power 2n+1 of a normal variable.
    #[arg(long)]
    pub n: Option<u32>,
    /// Power r of the absolute value of a normal variable.
    #[arg(long)]
    pub r: Option<f64>,
}

impl DensityArgs {
    pub fn spec(&self) -> Outcome<DensitySpec> {
        match (&self.spec, self.family) {
            (Some(s), _) => {
                let text = if s.trim_start().starts_with('{') {
                    s.clone()
                } else {
                    std::fs::read_to_string(s)
                        .map_err(|e| Failure::Input(format!("cannot read spec {s}: {e}")))?
                };
                Ok(DensitySpec::from_json(&text)?)
            }
            (None, Some(family)) => {
                let text = match family {
                    FamilyArg::OddNormalPower => {
                        let n = self.n.ok_or_else(|| {
                            Failure::Input("--family odd-normal-power needs --n".into())
                        })?;
                        format!(r#"{{"family":"odd_normal_power","n":{n}}}"#)
                    }
                    FamilyArg::AbsNormalPower => {
                        let r = self.r.ok_or_else(|| {
                            Failure::Input("--family abs-normal-power needs --r".into())
                        })?;
                        format!(
                            r#"{{"family":"abs_normal_power","r":{}}}"#,
                            crate::output::num(r)
                        )
                    }
                };
                Ok(DensitySpec::from_json(&text)?)
            }
            (None, None) => Err(Failure::Input("give --spec or --family".into())),
        }
    }

    pub fn density(&self) -> Outcome<(Density<f64>, String)> {
        let spec = self.spec()?;
        let density = spec.to_density::<f64>()?;
        Ok((density, label(&spec)))
    }
}

fn label(spec: &DensitySpec) -> String {
    serde_json::to_string(spec).expect("spec serializes")
}
