use std::fmt::Write as _;

use krein_core::{
    build_class_halfline, build_class_real, cross_validate, cross_validate_e, hilbert_e_symbolic,
    hilbert_symbolic, krein_check_halfline, krein_check_real, member, verify_moments,
    verify_nonzero, verify_unbounded_companion, CrossValidation, Density, Error, KreinStatus,
    KreinVerdict, MomentReport, NumericHilbert, PerturbationKind, PvParams, StieltjesClass,
    Support, Symmetry,
};
use serde::Serialize;

use crate::failure::{Failure, Outcome};
use crate::grid::Grid;
use crate::output::{self, num};
use crate::{ClassBuildArgs, ClassVerifyArgs, ExampleArgs, Format, Kind, KreinArgs, TransformArgs};

const PHASE_TOLERANCE: f64 = 1e-6;

fn grid_points(spec: Option<&str>, support: Support) -> Outcome<Vec<f64>> {
    let grid = match spec {
        Some(s) => Grid::parse(s)?,
        None => Grid::DEFAULT,
    };
    match support {
        Support::RealLine => Ok(grid.real_line()),
        Support::PositiveHalfLine => grid.half_line(),
    }
}

#[derive(Serialize)]
struct PhaseRow {
    t: f64,
    phase: f64,
    cos_phase: f64,
    sin_phase: f64,
    method: &'static str,
    error_estimate: f64,
}

fn phase_rows(f: &Density<f64>, points: &[f64]) -> Outcome<Vec<PhaseRow>> {
    let half = f.support() == Support::PositiveHalfLine;
    let symbolic = f.log_expr().and_then(|u| {
        if half {
            hilbert_e_symbolic(u).ok()
        } else {
            hilbert_symbolic(u).ok()
        }
    });
    let row = |t: f64, phase: f64, method, error_estimate| PhaseRow {
        t,
        phase,
        cos_phase: phase.cos(),
        sin_phase: phase.sin(),
        method,
        error_estimate,
    };
    if let Some(h) = symbolic {
        return Ok(points
            .iter()
            .map(|&t| row(t, h.eval(t), "symbolic", 0.0))
            .collect());
    }

    let undefined = |e: Error| match e {
        Error::Domain(m) => Failure::Precondition(m),
        other => other.into(),
    };
    let mut rows = Vec::with_capacity(points.len());
    if half {
        let u = |x: f64| f.ln_eval(x * x);
        let h = NumericHilbert::new(u, Symmetry::Even).map_err(undefined)?;
        for &t in points {
            let s = t.sqrt();
            let q = h.eval(s, &PvParams::for_point(s))?;
            rows.push(row(t, q.value, "numeric", q.abs_error_estimate));
        }
    } else {
        let symmetry = if f.is_even() {
            Symmetry::Even
        } else {
            Symmetry::General
        };
        let u = |x: f64| f.ln_eval(x);
        let h = NumericHilbert::new(u, symmetry).map_err(undefined)?;
        for &t in points {
            let q = h.eval(t, &PvParams::for_point(t))?;
            rows.push(row(t, q.value, "numeric", q.abs_error_estimate));
        }
    }
    Ok(rows)
}

pub fn transform(a: &TransformArgs) -> Outcome {
    let (f, _) = a.density.density()?;
    let points = grid_points(a.grid.as_deref(), f.support())?;
    let rows = phase_rows(&f, &points)?;
    let content = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => output::json(&rows)?,
        Format::Csv => output::csv(
            &[
                "t",
                "phase",
                "cos_phase",
                "sin_phase",
                "method",
                "error_estimate",
            ],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.t),
                        num(r.phase),
                        num(r.cos_phase),
                        num(r.sin_phase),
                        r.method.to_string(),
                        num(r.error_estimate),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    output::emit(a.output.out.as_deref(), &content)
}

fn krein_verdict(f: &Density<f64>) -> Outcome<KreinVerdict<f64>> {
    Ok(match f.support() {
        Support::RealLine => krein_check_real(f)?,
        Support::PositiveHalfLine => krein_check_halfline(f)?,
    })
}

fn verdict_outcome(v: &KreinVerdict<f64>) -> Outcome {
    match v.status {
        KreinStatus::Finite => Ok(()),
        KreinStatus::Divergent => Err(Failure::Precondition(
            "the logarithmic integral diverges".into(),
        )),
        KreinStatus::Inconclusive => Err(Failure::Verification(
            "the logarithmic integral did not converge".into(),
        )),
    }
}

pub fn krein_check(a: &KreinArgs) -> Outcome {
    if a.output.format == Some(Format::Csv) {
        return Err(Failure::Input("krein-check emits JSON only".into()));
    }
    let (f, _) = a.density.density()?;
    let verdict = krein_verdict(&f)?;
    output::emit(a.output.out.as_deref(), &output::json(&verdict)?)?;
    verdict_outcome(&verdict)
}

fn build_class(f: &Density<f64>, kind: Kind) -> Outcome<StieltjesClass<f64>> {
    Ok(match f.support() {
        Support::RealLine => {
            let k = match kind {
                Kind::Cos => PerturbationKind::CosH,
                Kind::Sin => PerturbationKind::SinH,
            };
            build_class_real(f, k)?
        }
        Support::PositiveHalfLine => {
            if kind == Kind::Sin {
                log::info!("half-line classes always use sin(𝓗ₑ ln f); --kind is ignored");
            }
            build_class_halfline(f)?
        }
    })
}

fn eps_column(eps: f64) -> String {
    format!("eps_{}", num(eps))
}

pub fn class_build(a: &ClassBuildArgs) -> Outcome {
    let (f, _) = a.density.density()?;
    let points = grid_points(a.grid.as_deref(), f.support())?;
    let class = build_class(&f, a.kind)?;
    let epsilons = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let members = epsilons
        .iter()
        .map(|&e| member(&class, e))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["x".to_string(), "center".into(), "h".into()];
    header.extend(epsilons.iter().map(|&e| eps_column(e)));
    let values: Vec<Vec<f64>> = points
        .iter()
        .map(|&x| {
            let mut row = vec![x, f.eval(x), class.perturbation().eval(x)];
            row.extend(members.iter().map(|m| m.eval(x)));
            row
        })
        .collect();

    let content = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = values
                .iter()
                .map(|r| r.iter().map(|&v| num(v)).collect())
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            output::csv(&header, &rows)?
        }
        Format::Json => {
            let rows: Vec<serde_json::Map<String, serde_json::Value>> = values
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .cloned()
                        .zip(r.iter().map(|&v| serde_json::json!(v)))
                        .collect()
                })
                .collect();
            output::json(&rows)?
        }
    };
    output::emit(a.output.out.as_deref(), &content)
}

fn report_outcome(r: &MomentReport<f64>) -> Outcome {
    if !r.pass {
        let failed: Vec<String> = r
            .orders
            .iter()
            .zip(&r.order_pass)
            .filter(|(_, ok)| !**ok)
            .map(|(k, _)| k.to_string())
            .collect();
        let limited: Vec<String> = r
            .orders
            .iter()
            .zip(&r.precision_limited)
            .filter(|(_, l)| **l)
            .map(|(k, _)| k.to_string())
            .collect();
        let hint = if limited.is_empty() {
            String::new()
        } else {
            format!(
                "; orders {} cancel beyond f64 precision and cannot be certified here",
                limited.join(", ")
            )
        };
        return Err(Failure::Verification(format!(
            "perturbation integrals above tolerance or inconclusive at orders {}{hint}",
            failed.join(", ")
        )));
    }
    if !r.members_pass {
        return Err(Failure::Verification(
            "member moments differ from the center's".into(),
        ));
    }
    Ok(())
}

fn check_tolerance(tol: f64) -> Outcome {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Input(format!("--tol must be positive, got {tol}")))
    }
}

pub fn class_verify(a: &ClassVerifyArgs) -> Outcome {
    check_tolerance(a.tol)?;
    let (f, _) = a.density.density()?;
    let class = build_class(&f, a.kind)?;
    let report = verify_moments(&class, a.max_order, a.tol)?;
    let content = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => output::json(&report)?,
        Format::Csv => output::csv(
            &[
                "order",
                "center_moment",
                "perturbation_integral",
                "error",
                "pass",
            ],
            &(0..report.orders.len())
                .map(|i| {
                    vec![
                        report.orders[i].to_string(),
                        num(report.center_moments[i]),
                        num(report.perturbation_integrals[i]),
                        num(report.error_estimates[i]),
                        report.order_pass[i].to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    output::emit(a.output.out.as_deref(), &content)?;
    report_outcome(&report)
}

#[derive(Serialize)]
struct ClassSummary {
    kind: PerturbationKind,
    report: MomentReport<f64>,
    members_pass: bool,
    max_member_deviation: f64,
    nonzero: bool,
}

#[derive(Serialize)]
struct ExampleSummary {
    density: String,
    krein: KreinVerdict<f64>,
    phase_check: Option<PhaseCheck>,
    classes: Vec<ClassSummary>,
    companion: Option<MomentReport<f64>>,
    pass: bool,
}

#[derive(Serialize)]
struct PhaseCheck {
    points: usize,
    tolerance: f64,
    max_abs_diff: f64,
    pass: bool,
}

impl From<&CrossValidation<f64>> for PhaseCheck {
    fn from(c: &CrossValidation<f64>) -> Self {
        PhaseCheck {
            points: c.entries.len(),
            tolerance: c.tolerance,
            max_abs_diff: c.max_abs_diff(),
            pass: c.pass,
        }
    }
}

pub fn example(a: &ExampleArgs) -> Outcome {
    check_tolerance(a.tol)?;
    if a.density.family.is_none() {
        return Err(Failure::Input("example needs --family".into()));
    }
    let (f, label) = a.density.density()?;
    let krein = krein_verdict(&f)?;
    let mut summary = ExampleSummary {
        density: label,
        krein,
        phase_check: None,
        classes: Vec::new(),
        companion: None,
        pass: false,
    };

    if summary.krein.is_finite() {
        let u = f.log_expr().expect("family densities carry an expression");
        let (check, kinds) = match f.support() {
            Support::RealLine => (
                cross_validate(u, &Grid::DEFAULT.real_line(), PHASE_TOLERANCE)?,
                vec![Kind::Cos, Kind::Sin],
            ),
            Support::PositiveHalfLine => (
                cross_validate_e(u, &Grid::DEFAULT.half_line()?, PHASE_TOLERANCE)?,
                vec![Kind::Sin],
            ),
        };
        summary.phase_check = Some(PhaseCheck::from(&check));
        for kind in kinds {
            let class = build_class(&f, kind)?;
            let report = verify_moments(&class, a.max_order, a.tol)?;
            let max_member_deviation = report
                .member_deviations
                .iter()
                .zip(&report.center_moments)
                .flat_map(|(ds, m)| ds.iter().map(move |d| d.abs() / m.abs().max(1.0)))
                .fold(0.0, f64::max);
            summary.classes.push(ClassSummary {
                kind: class.perturbation().kind(),
                members_pass: report.members_pass,
                max_member_deviation,
                nonzero: verify_nonzero(&class),
                report,
            });
            if f.support() == Support::PositiveHalfLine {
                summary.companion = Some(verify_unbounded_companion(&class, a.max_order, a.tol)?);
            }
        }
        summary.pass = summary.phase_check.as_ref().is_some_and(|c| c.pass)
            && summary
                .classes
                .iter()
                .all(|c| c.report.pass && c.members_pass && c.nonzero)
            && summary.companion.as_ref().is_none_or(|c| c.pass);
    }

    let content = match a.output.format {
        Some(Format::Json) => output::json(&summary)?,
        Some(Format::Csv) => return Err(Failure::Input("example emits text or JSON".into())),
        None => render(&summary),
    };
    output::emit(a.output.out.as_deref(), &content)?;

    verdict_outcome(&summary.krein)?;
    if summary.pass {
        Ok(())
    } else {
        Err(Failure::Verification("see the summary above".into()))
    }
}

fn status_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn render(s: &ExampleSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "density      {}", s.density);
    let v = &s.krein;
    let _ = writeln!(
        out,
        "krein        {:?} ({:?}){}",
        v.status,
        v.method,
        v.value
            .map(|x| format!(", logarithmic integral {}", num(x)))
            .unwrap_or_default()
    );
    if v.status != KreinStatus::Finite {
        let _ = writeln!(out, "             {}", v.diagnostics);
        let _ = writeln!(out, "result       no Stieltjes class: the condition fails");
        return out;
    }
    if let Some(c) = &s.phase_check {
        let _ = writeln!(
            out,
            "phase        {}: {} points, max |numeric - symbolic| {} (tol {})",
            status_word(c.pass),
            c.points,
            num(c.max_abs_diff),
            num(c.tolerance)
        );
    }
    for c in &s.classes {
        let r = &c.report;
        let _ = writeln!(
            out,
            "class {:?}  moments {} (k = 0..{}, tol {}, max |∫x^k f h|/max(1, m_k) {}); members {} (max deviation {}); nonzero {}",
            c.kind,
            status_word(r.pass),
            r.orders.last().copied().unwrap_or(0),
            num(r.tolerance),
            num(r.max_scaled_integral()),
            status_word(c.members_pass),
            num(c.max_member_deviation),
            c.nonzero
        );
        render_table(&mut out, r);
    }
    if let Some(r) = &s.companion {
        let _ = writeln!(
            out,
            "companion    ∫x^(k+1/2) f cos(𝓗ₑ ln f) {} (max scaled {})",
            status_word(r.pass),
            num(r.max_scaled_integral())
        );
    }
    let _ = writeln!(out, "result       {}", if s.pass { "PASS" } else { "FAIL" });
    out
}

fn render_table(out: &mut String, r: &MomentReport<f64>) {
    let _ = writeln!(
        out,
        "  {:>3}  {:>24}  {:>24}  {:>24}",
        "k", "moment", "∫x^k f h", "error"
    );
    for i in 0..r.orders.len() {
        let note = if r.precision_limited.get(i).copied().unwrap_or(false) {
            "  precision-limited: cancellation exceeds f64"
        } else if r.inconclusive.get(i).copied().unwrap_or(false) {
            "  inconclusive"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  {:>3}  {:>24}  {:>24}  {:>24}{note}",
            r.orders[i],
            num(r.center_moments[i]),
            num(r.perturbation_integrals[i]),
            num(r.error_estimates[i])
        );
    }
}
