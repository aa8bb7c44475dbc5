//! Stieltjes classes `f(x)(1 + ε h(x))`, `ε ∈ [−1, 1]`, with perturbations
//! `h = cos(𝓗 ln f)`, `sin(𝓗 ln f)` on `ℝ` and `h = sin(𝓗ₑ ln f)` on `ℝ⁺`.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::density::{moment, Density, Support};
use crate::error::{Error, Result};
use crate::hilbert::{hilbert_e_symbolic, hilbert_symbolic, HilbertExpr, NumericHilbert, Symmetry};
use crate::krein::{krein_check_halfline, krein_check_real, KreinVerdict};
use crate::quadrature::{integrate_improper, ImproperOptions, PvParams, QuadResult};
use crate::scalar::Real;

pub const DEFAULT_MAX_ORDER: u32 = 8;
pub const DEFAULT_TOLERANCE: f64 = 1e-7;
/// Members whose moments are compared against the center's.
pub const MEMBER_EPSILONS: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

const INTEGRAL_REL_TOL: f64 = 1e-9;
const MEMBER_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    /// `cos(𝓗 ln f)` on the real line.
    CosH,
    /// `sin(𝓗 ln f)` on the real line.
    SinH,
    /// `sin(𝓗ₑ ln f)` on the half line.
    SinHe,
}

impl PerturbationKind {
    pub fn support(self) -> Support {
        match self {
            PerturbationKind::CosH | PerturbationKind::SinH => Support::RealLine,
            PerturbationKind::SinHe => Support::PositiveHalfLine,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    Symbolic,
    Numeric,
    /// Phase given directly by the caller.
    Supplied,
}

pub type PhaseFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Bounded perturbation `h = cos(phase)` or `sin(phase)`.
///
/// A numeric phase that fails to converge evaluates to NaN, which
/// [`verify_moments`] reports as an inconclusive order.
#[derive(Clone)]
pub struct Perturbation<T> {
    kind: PerturbationKind,
    method: PhaseMethod,
    symbolic: Option<HilbertExpr<T>>,
    phase: PhaseFn<T>,
}

impl<T: Real> std::fmt::Debug for Perturbation<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Perturbation")
            .field("kind", &self.kind)
            .field("method", &self.method)
            .field("symbolic", &self.symbolic)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Perturbation<T> {
    fn symbolic(kind: PerturbationKind, expr: HilbertExpr<T>) -> Self {
        let e = expr.clone();
        Self {
            kind,
            method: PhaseMethod::Symbolic,
            symbolic: Some(expr),
            phase: Arc::new(move |t| e.eval(t)),
        }
    }

    /// Perturbation with a caller-supplied phase, e.g. for synthetic checks.
    pub fn from_phase<F>(kind: PerturbationKind, phase: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            kind,
            method: PhaseMethod::Supplied,
            symbolic: None,
            phase: Arc::new(phase),
        }
    }

    pub fn kind(&self) -> PerturbationKind {
        self.kind
    }

    pub fn method(&self) -> PhaseMethod {
        self.method
    }

    pub fn symbolic_phase(&self) -> Option<&HilbertExpr<T>> {
        self.symbolic.as_ref()
    }

    pub fn phase(&self, t: T) -> T {
        (self.phase)(t)
    }

    /// `h(t)`; zero off the half line for `SinHe`.
    pub fn eval(&self, t: T) -> T {
        match self.kind {
            PerturbationKind::CosH => self.phase(t).cos(),
            PerturbationKind::SinH => self.phase(t).sin(),
            PerturbationKind::SinHe if t < T::zero() => T::zero(),
            PerturbationKind::SinHe => self.phase(t).sin(),
        }
    }
}

#[derive(Clone)]
pub struct StieltjesClass<T> {
    center: Density<T>,
    perturbation: Perturbation<T>,
    krein: Option<KreinVerdict<T>>,
}

impl<T: Real> std::fmt::Debug for StieltjesClass<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StieltjesClass")
            .field("center", &self.center)
            .field("perturbation", &self.perturbation)
            .field("krein", &self.krein)
            .finish()
    }
}

impl<T: Real> StieltjesClass<T> {
    /// Pairs a center with an arbitrary perturbation without checking that
    /// the moment integrals vanish; [`verify_moments`] decides that.
    pub fn new(center: Density<T>, perturbation: Perturbation<T>) -> Result<Self> {
        center.support().expect(perturbation.kind.support())?;
        Ok(Self {
            center,
            perturbation,
            krein: None,
        })
    }

    pub fn center(&self) -> &Density<T> {
        &self.center
    }

    pub fn perturbation(&self) -> &Perturbation<T> {
        &self.perturbation
    }

    pub fn support(&self) -> Support {
        self.center.support()
    }

    /// Verdict that admitted the center, when built from a theorem.
    pub fn krein_verdict(&self) -> Option<&KreinVerdict<T>> {
        self.krein.as_ref()
    }
}

/// Real-line class with the phase `𝓗 ln f`, symbolic when possible.
pub fn build_class_real<T: Real>(
    f: &Density<T>,
    kind: PerturbationKind,
) -> Result<StieltjesClass<T>> {
    let method = if f.log_expr().is_some() {
        PhaseMethod::Symbolic
    } else {
        PhaseMethod::Numeric
    };
    build_class_real_with(f, kind, method)
}

pub fn build_class_real_with<T: Real>(
    f: &Density<T>,
    kind: PerturbationKind,
    method: PhaseMethod,
) -> Result<StieltjesClass<T>> {
    if kind == PerturbationKind::SinHe {
        return Err(Error::Domain(
            "sin(𝓗ₑ ln f) is a half-line perturbation".into(),
        ));
    }
    f.support().expect(Support::RealLine)?;
    let verdict = admit(krein_check_real(f)?)?;
    let perturbation = match (method, f.log_expr()) {
        (PhaseMethod::Symbolic, Some(u)) => Perturbation::symbolic(kind, hilbert_symbolic(u)?),
        (PhaseMethod::Symbolic, None) => {
            return Err(Error::Precondition(
                "symbolic phase needs a log-density expression".into(),
            ))
        }
        (PhaseMethod::Numeric, _) => numeric_real(f, kind),
        (PhaseMethod::Supplied, _) => {
            return Err(Error::Precondition(
                "supplied phases go through Perturbation::from_phase".into(),
            ))
        }
    };
    Ok(StieltjesClass {
        center: f.clone(),
        perturbation,
        krein: Some(verdict),
    })
}

/// Half-line class with the phase `𝓗ₑ ln f`, symbolic when possible.
pub fn build_class_halfline<T: Real>(f: &Density<T>) -> Result<StieltjesClass<T>> {
    let method = if f.log_expr().is_some() {
        PhaseMethod::Symbolic
    } else {
        PhaseMethod::Numeric
    };
    build_class_halfline_with(f, method)
}

pub fn build_class_halfline_with<T: Real>(
    f: &Density<T>,
    method: PhaseMethod,
) -> Result<StieltjesClass<T>> {
    f.support().expect(Support::PositiveHalfLine)?;
    let verdict = admit(krein_check_halfline(f)?)?;
    let kind = PerturbationKind::SinHe;
    let perturbation = match (method, f.log_expr()) {
        (PhaseMethod::Symbolic, Some(u)) => Perturbation::symbolic(kind, hilbert_e_symbolic(u)?),
        (PhaseMethod::Symbolic, None) => {
            return Err(Error::Precondition(
                "symbolic phase needs a log-density expression".into(),
            ))
        }
        (PhaseMethod::Numeric, _) => numeric_halfline(f),
        (PhaseMethod::Supplied, _) => {
            return Err(Error::Precondition(
                "supplied phases go through Perturbation::from_phase".into(),
            ))
        }
    };
    Ok(StieltjesClass {
        center: f.clone(),
        perturbation,
        krein: Some(verdict),
    })
}

fn admit<T: Real>(verdict: KreinVerdict<T>) -> Result<KreinVerdict<T>> {
    if verdict.is_finite() {
        Ok(verdict)
    } else {
        Err(Error::Precondition(format!(
            "Krein condition is {:?}, not finite: {}",
            verdict.status, verdict.diagnostics
        )))
    }
}

type LogFn<T> = Box<dyn Fn(T) -> T + Send + Sync>;

fn numeric_phase_value<T: Real>(h: &NumericHilbert<LogFn<T>>, t: T) -> T {
    match h.eval(t, &PvParams::for_point(t)) {
        Ok(q) => q.value,
        Err(e) => {
            log::warn!("numeric phase failed at t = {t}: {e}");
            T::nan()
        }
    }
}

fn numeric_real<T: Real>(f: &Density<T>, kind: PerturbationKind) -> Perturbation<T> {
    let center = f.clone();
    let symmetry = if f.is_even() {
        Symmetry::Even
    } else {
        Symmetry::General
    };
    // The Krein check already established ∫|ln f|/(1+x²) < ∞.
    let u: LogFn<T> = Box::new(move |x| center.ln_eval(x));
    let h = NumericHilbert::unchecked(u, symmetry);
    Perturbation {
        kind,
        method: PhaseMethod::Numeric,
        symbolic: None,
        phase: Arc::new(move |t| numeric_phase_value(&h, t)),
    }
}

fn numeric_halfline<T: Real>(f: &Density<T>) -> Perturbation<T> {
    let center = f.clone();
    let u: LogFn<T> = Box::new(move |x| center.ln_eval(x * x));
    let h = NumericHilbert::unchecked(u, Symmetry::Even);
    Perturbation {
        kind: PerturbationKind::SinHe,
        method: PhaseMethod::Numeric,
        symbolic: None,
        phase: Arc::new(move |t: T| {
            if t > T::zero() {
                numeric_phase_value(&h, t.sqrt())
            } else {
                T::nan()
            }
        }),
    }
}

/// Member density `f(x)(1 + ε h(x))`.
pub fn member<T: Real>(class: &StieltjesClass<T>, epsilon: T) -> Result<Density<T>> {
    if !(epsilon.abs() <= T::one()) {
        return Err(Error::Domain(format!(
            "ε = {epsilon} lies outside [-1, 1]; the member may be negative"
        )));
    }
    if epsilon == T::zero() {
        return Ok(class.center.clone());
    }
    let f = class.center.evaluator();
    let h = class.perturbation.clone();
    let eval = move |x: T| {
        let v = f(x);
        if v == T::zero() {
            v
        } else {
            v * (T::one() + epsilon * h.eval(x))
        }
    };
    Ok(Density::custom(eval, class.support(), None))
}

/// Moment check of a class. Serializes to the five report keys only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport<T> {
    pub orders: Vec<u32>,
    pub center_moments: Vec<T>,
    pub perturbation_integrals: Vec<T>,
    #[serde(rename = "errors")]
    pub error_estimates: Vec<T>,
    pub pass: bool,
    #[serde(skip)]
    pub tolerance: T,
    /// Per order: converged and within tolerance.
    #[serde(skip)]
    pub order_pass: Vec<bool>,
    /// Per order: the integral could not be certified to the tolerance.
    #[serde(skip)]
    pub inconclusive: Vec<bool>,
    /// Per order: certification needs more precision than the scalar type has.
    #[serde(skip)]
    pub precision_limited: Vec<bool>,
    /// Per order, `moment(member(ε), k) − moment(f, k)` for each of [`MEMBER_EPSILONS`].
    #[serde(skip)]
    pub member_deviations: Vec<Vec<T>>,
    #[serde(skip)]
    pub members_pass: bool,
}

impl<T: Real> MomentReport<T> {
    pub fn max_scaled_integral(&self) -> T {
        self.perturbation_integrals
            .iter()
            .zip(&self.center_moments)
            .map(|(i, m)| i.abs() / T::one().max(m.abs()))
            .fold(T::zero(), T::max)
    }
}

struct OrderOutcome<T> {
    center: T,
    integral: QuadResult<T>,
    certainty: Certainty,
    undefined_phase: bool,
    member_deviations: Vec<T>,
    members_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Certainty {
    Certified,
    Inconclusive,
    PrecisionLimited,
}

/// Integrates `g` so that its error estimate is at most `allowed`.
///
/// A first pass runs at `base_tol` relative to `max(1, |I|, ∫|g|)`. If it
/// converges with too wide an error bar, the target is tightened to what
/// `allowed` demands; when that lies below the resolution of `T` and the
/// error bar still exceeds `allowed`, the result is precision-limited.
fn certified<T: Real, G: Fn(T) -> T>(
    g: &G,
    support: Support,
    oscillatory: bool,
    base_tol: T,
    allowed: T,
) -> (QuadResult<T>, Certainty) {
    let run = |tol: T| {
        let opts = ImproperOptions::new(tol);
        let opts = if oscillatory {
            opts.oscillatory()
        } else {
            opts
        };
        integrate_improper(g, support.quadrature_domain(), &opts)
    };
    let q = run(base_tol);
    if q.converged && q.abs_error_estimate <= allowed {
        return (q, Certainty::Certified);
    }
    let needed = T::lit(0.1) * allowed / T::one().max(q.value.abs()).max(q.magnitude);
    if !q.converged || needed >= base_tol {
        return (q, Certainty::Inconclusive);
    }
    let floor = T::lit(100.0) * T::epsilon();
    // The tight pass may stop short of its own target near the floor; its
    // error bar is what certification needs.
    let tight = run(needed.max(floor));
    if !tight.diverged && tight.value.is_finite() && tight.abs_error_estimate <= allowed {
        (tight, Certainty::Certified)
    } else if needed < floor {
        (tight, Certainty::PrecisionLimited)
    } else {
        (tight, Certainty::Inconclusive)
    }
}

/// Computes `∫ x^k f h` for `k = 0..=max_order`, and the moments of the
/// members at [`MEMBER_EPSILONS`] by independent quadrature.
pub fn verify_moments<T: Real>(
    class: &StieltjesClass<T>,
    max_order: u32,
    tolerance: T,
) -> Result<MomentReport<T>> {
    let weight = |_: T| T::one();
    let orders: Vec<u32> = (0..=max_order).collect();
    let outcomes = run_orders(&orders, |k| {
        let m = moment(&class.center, k)?;
        Ok(check_order(class, k, m, &weight, tolerance, true))
    })?;
    Ok(assemble(orders, outcomes, tolerance))
}

/// `∫₀^∞ x^{k+1/2} f(x) cos(𝓗ₑ ln f(x)) dx = 0`: the vanishing integrals of
/// the unbounded companion `x^{1/2} sin(𝓗 ln f*(x^{1/2}))`, which is not a
/// valid perturbation. Center moments are the half-integer moments of `f`.
pub fn verify_unbounded_companion<T: Real>(
    class: &StieltjesClass<T>,
    max_order: u32,
    tolerance: T,
) -> Result<MomentReport<T>> {
    if class.perturbation.kind != PerturbationKind::SinHe {
        return Err(Error::Precondition(
            "the unbounded companion exists for half-line classes only".into(),
        ));
    }
    let orders: Vec<u32> = (0..=max_order).collect();
    let outcomes = run_orders(&orders, |k| {
        let f = &class.center;
        let g = |x: T| {
            let v = f.eval(x);
            if v == T::zero() {
                v
            } else {
                x.powi(k as i32) * x.sqrt() * v
            }
        };
        let m = integrate_improper(
            &g,
            f.support().quadrature_domain(),
            &ImproperOptions::new(T::lit(MEMBER_REL_TOL)),
        );
        if !m.converged {
            return Err(Error::Accuracy {
                estimate: m.value.as_f64(),
                error: m.abs_error_estimate.as_f64(),
            });
        }
        // sin(−π/2 + φ) = −cos φ; the sign does not affect vanishing.
        let cos_over_sin = |x: T| {
            let p = class.perturbation.phase(x);
            x.sqrt() * p.cos()
        };
        Ok(check_order(
            class,
            k,
            m.value,
            &cos_over_sin,
            tolerance,
            false,
        ))
    })?;
    Ok(assemble(orders, outcomes, tolerance))
}

fn run_orders<T, F>(orders: &[u32], job: F) -> Result<Vec<OrderOutcome<T>>>
where
    T: Real,
    F: Fn(u32) -> Result<OrderOutcome<T>> + Sync,
{
    std::thread::scope(|s| {
        let handles: Vec<_> = orders
            .iter()
            .map(|&k| {
                let job = &job;
                s.spawn(move || job(k))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("order worker panicked"))
            .collect()
    })
}

/// `weight` replaces `h` in the integrand when `use_h` is false.
fn check_order<T: Real, W: Fn(T) -> T>(
    class: &StieltjesClass<T>,
    k: u32,
    center: T,
    weight: &W,
    tolerance: T,
    use_h: bool,
) -> OrderOutcome<T> {
    let f = &class.center;
    let h = &class.perturbation;
    let support = f.support();
    let allowed = tolerance * T::one().max(center.abs());
    let undefined = AtomicBool::new(false);
    let g = |x: T| {
        let v = f.eval(x);
        if v == T::zero() {
            return T::zero();
        }
        let w = if use_h { h.eval(x) } else { weight(x) };
        if w.is_nan() {
            undefined.store(true, Ordering::Relaxed);
            return T::zero();
        }
        x.powi(k as i32) * v * w
    };
    let (integral, certainty) = certified(&g, support, true, T::lit(INTEGRAL_REL_TOL), allowed);

    let mut member_deviations = Vec::new();
    let mut members_ok = true;
    if use_h {
        for eps in MEMBER_EPSILONS {
            let eps = T::lit(eps);
            let gm = |x: T| {
                let v = f.eval(x);
                if v == T::zero() {
                    return T::zero();
                }
                let w = h.eval(x);
                if w.is_nan() {
                    undefined.store(true, Ordering::Relaxed);
                    return T::zero();
                }
                x.powi(k as i32) * v * (T::one() + eps * w)
            };
            let (q, c) = certified(&gm, support, false, T::lit(MEMBER_REL_TOL), allowed);
            let d = q.value - center;
            members_ok &= c == Certainty::Certified && d.abs() <= allowed;
            member_deviations.push(d);
        }
    }
    OrderOutcome {
        center,
        integral,
        certainty,
        undefined_phase: undefined.load(Ordering::Relaxed),
        member_deviations,
        members_ok,
    }
}

fn assemble<T: Real>(
    orders: Vec<u32>,
    outcomes: Vec<OrderOutcome<T>>,
    tolerance: T,
) -> MomentReport<T> {
    let mut report = MomentReport {
        orders,
        center_moments: Vec::new(),
        perturbation_integrals: Vec::new(),
        error_estimates: Vec::new(),
        pass: true,
        tolerance,
        order_pass: Vec::new(),
        inconclusive: Vec::new(),
        precision_limited: Vec::new(),
        member_deviations: Vec::new(),
        members_pass: true,
    };
    for (k, o) in report.orders.iter().zip(outcomes) {
        let inconclusive = o.certainty != Certainty::Certified || o.undefined_phase;
        let ok =
            !inconclusive && o.integral.value.abs() <= tolerance * T::one().max(o.center.abs());
        match o.certainty {
            Certainty::PrecisionLimited => log::warn!(
                "order {k}: certifying |∫x^k f h| <= {tolerance}·max(1, m_k) needs a wider scalar type; \
                 cancellation against ∫|x^k f h| = {} exceeds its precision",
                o.integral.magnitude
            ),
            Certainty::Inconclusive => log::warn!("order {k}: perturbation integral inconclusive"),
            Certainty::Certified => {}
        }
        report.pass &= ok;
        report.members_pass &= o.members_ok && !o.undefined_phase;
        report.center_moments.push(o.center);
        report.perturbation_integrals.push(o.integral.value);
        report.error_estimates.push(o.integral.abs_error_estimate);
        report.order_pass.push(ok);
        report.inconclusive.push(inconclusive);
        report
            .precision_limited
            .push(o.certainty == Certainty::PrecisionLimited);
        report.member_deviations.push(o.member_deviations);
    }
    report
}

/// True when `∫|f h|` clearly exceeds its error estimate.
pub fn verify_nonzero<T: Real>(class: &StieltjesClass<T>) -> bool {
    let f = &class.center;
    let h = &class.perturbation;
    let g = |x: T| {
        let v = f.eval(x);
        if v == T::zero() {
            return T::zero();
        }
        (v * h.eval(x)).abs()
    };
    let q = integrate_improper(
        &g,
        f.support().quadrature_domain(),
        &ImproperOptions::new(T::lit(INTEGRAL_REL_TOL)),
    );
    q.value.is_finite() && q.value > T::lit(10.0) * q.abs_error_estimate
}
