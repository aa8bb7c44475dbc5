//! Improper integrals over `[0, ∞)` and `ℝ`.
//!
//! The head `[0, x₀]` is integrated with tanh-sinh, which absorbs integrable
//! singularities at the origin. Beyond `x₀` the axis is cut into doubling
//! panels `[x₀2ʲ, x₀2ʲ⁺¹]`; the panel increments form a growth table used to
//! tell convergence from divergence. Once increments decay geometrically the
//! remaining tail is mapped onto `(0, 1]` by `x = X/s` and integrated in one
//! piece. Oscillatory integrands are additionally split at sign changes and
//! the resulting alternating lobe sums can be extrapolated with Wynn's
//! epsilon algorithm.

use log::debug;

use super::accel::wynn_epsilon;
use super::gauss::adaptive_gauss_kronrod;
use super::tanh_sinh::tanh_sinh;
use super::{from_adaptive, from_tanh_sinh, QuadResult};
use crate::scalar::Real;

const PANEL_SUBDIVISIONS: usize = 400;
const SCAN_POINTS: usize = 128;
const GROWTH_RATIO: f64 = 0.995;
const DECAY_RATIO: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImproperDomain {
    /// `[0, ∞)`
    HalfLine,
    /// `(-∞, ∞)`, split at the origin.
    RealLine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImproperOptions<T> {
    pub rel_tol: T,
    /// Split panels at sign changes and accelerate the lobe sums.
    pub oscillatory: bool,
    /// End of the head interval `[0, x₀]`.
    pub head: T,
    pub max_doublings: usize,
    /// Increments must keep growing up to `x₀·2^k` before divergence is declared.
    pub divergence_doublings: usize,
}

impl<T: Real> ImproperOptions<T> {
    pub fn new(rel_tol: T) -> Self {
        Self {
            rel_tol,
            oscillatory: false,
            head: T::one(),
            max_doublings: 64,
            divergence_doublings: 40,
        }
    }

    pub fn oscillatory(mut self) -> Self {
        self.oscillatory = true;
        self
    }
}

impl<T: Real> Default for ImproperOptions<T> {
    fn default() -> Self {
        Self::new(T::lit(1e-9))
    }
}

pub fn integrate_improper<T: Real, G: Fn(T) -> T>(
    g: &G,
    domain: ImproperDomain,
    opts: &ImproperOptions<T>,
) -> QuadResult<T> {
    let mut res = match domain {
        ImproperDomain::HalfLine => half_line(g, opts),
        ImproperDomain::RealLine => {
            let right = half_line(g, opts);
            let mirrored = |x: T| g(-x);
            let left = half_line(&mirrored, opts);
            right.combine(left)
        }
    };
    res.converged = res.converged && !res.diverged && res.meets(opts.rel_tol);
    res
}

/// `∫_a^∞ g(x) dx` for `a > 0` through the map `x = a/s`.
pub fn integrate_tail<T: Real, G: Fn(T) -> T>(g: &G, a: T, rel_tol: T) -> QuadResult<T> {
    let mapped = |s: T| {
        let x = a / s;
        if !x.is_finite() || (s * s).is_zero() {
            return T::zero();
        }
        g(x) * a / (s * s)
    };
    let mut res = from_tanh_sinh(tanh_sinh(&mapped, T::zero(), T::one(), T::zero(), rel_tol));
    res.converged = res.converged && res.meets(rel_tol);
    res
}

fn half_line<T: Real, G: Fn(T) -> T>(g: &G, opts: &ImproperOptions<T>) -> QuadResult<T> {
    let tol = opts.rel_tol;
    let head = from_tanh_sinh(tanh_sinh(
        g,
        T::zero(),
        opts.head,
        T::zero(),
        tol * T::lit(0.1),
    ));
    if opts.oscillatory {
        oscillatory_tail(g, head, opts)
    } else {
        monotone_tail(g, head, opts)
    }
}

fn doubling_panel<T: Real>(x0: T, j: usize) -> (T, T) {
    let lo = x0 * T::lit(2.0).powi(j as i32);
    (lo, lo + lo)
}

fn negligible<T: Real>(panel_magnitude: T, total_magnitude: T, rel_tol: T) -> bool {
    panel_magnitude <= T::lit(1e-3) * rel_tol * total_magnitude
}

/// Classifies the last three ratios of consecutive increments.
enum Trend {
    Growing,
    Decaying,
    Unclear,
}

fn trend<T: Real>(increments: &[T]) -> Trend {
    let n = increments.len();
    if n < 4 {
        return Trend::Unclear;
    }
    let ratios: Vec<T> = (n - 3..n)
        .map(|i| increments[i] / increments[i - 1])
        .collect();
    if ratios
        .iter()
        .all(|r| r.is_finite() && *r >= T::lit(GROWTH_RATIO))
    {
        Trend::Growing
    } else if ratios
        .iter()
        .all(|r| r.is_finite() && r.abs() <= T::lit(DECAY_RATIO))
    {
        Trend::Decaying
    } else {
        Trend::Unclear
    }
}

fn monotone_tail<T: Real, G: Fn(T) -> T>(
    g: &G,
    head: QuadResult<T>,
    opts: &ImproperOptions<T>,
) -> QuadResult<T> {
    let tol = opts.rel_tol;
    let mut total = head;
    let mut increments: Vec<T> = Vec::new();
    let mut quiet = 0;
    for j in 0..opts.max_doublings {
        let (lo, hi) = doubling_panel(opts.head, j);
        let panel = from_adaptive(adaptive_gauss_kronrod(
            g,
            lo,
            hi,
            T::zero(),
            tol * T::lit(0.1),
            PANEL_SUBDIVISIONS,
        ));
        total = total.combine(panel);
        increments.push(panel.value);

        if negligible(panel.magnitude, total.magnitude, tol) {
            quiet += 1;
            if quiet >= 2 {
                return total;
            }
            continue;
        }
        quiet = 0;

        match trend(&increments) {
            Trend::Growing if panel.value.abs() > tol * total.scale() => {
                if j + 1 >= opts.divergence_doublings {
                    debug!("partial integrals keep growing up to x = {hi}; diverged");
                    total.diverged = true;
                    total.converged = false;
                    return total;
                }
            }
            Trend::Decaying => {
                let rest = integrate_tail(g, hi, tol * T::lit(0.1));
                if rest.converged {
                    return total.combine(rest);
                }
            }
            _ => {}
        }
    }
    let (_, hi) = doubling_panel(opts.head, opts.max_doublings - 1);
    let rest = integrate_tail(g, hi, tol * T::lit(0.1));
    debug!(
        "no decay detected before x = {hi}; mapped tail converged = {}",
        rest.converged
    );
    total.combine(rest)
}

fn oscillatory_tail<T: Real, G: Fn(T) -> T>(
    g: &G,
    head: QuadResult<T>,
    opts: &ImproperOptions<T>,
) -> QuadResult<T> {
    let tol = opts.rel_tol;
    let mut total = head;
    let mut partial_sums: Vec<T> = Vec::new();
    let mut lobe = T::zero();
    let mut magnitudes: Vec<T> = Vec::new();
    let mut quiet = 0;
    let step = T::lit(2.0).powf(T::one() / T::lit(SCAN_POINTS as f64));

    for j in 0..opts.max_doublings {
        let (lo, hi) = doubling_panel(opts.head, j);
        let mut cuts = Vec::new();
        let mut x_prev = lo;
        let mut v_prev = g(lo);
        for i in 1..=SCAN_POINTS {
            let x = if i == SCAN_POINTS { hi } else { x_prev * step };
            let v = g(x);
            if v_prev.is_finite() && v.is_finite() && v_prev * v < T::zero() {
                cuts.push(bisect_sign_change(g, x_prev, x, v_prev));
            }
            x_prev = x;
            v_prev = v;
        }

        let mut doubling = QuadResult {
            value: T::zero(),
            abs_error_estimate: T::zero(),
            converged: true,
            diverged: false,
            magnitude: T::zero(),
        };
        let mut start = lo;
        for end in cuts.iter().copied().chain(std::iter::once(hi)) {
            if !(end > start) {
                continue;
            }
            let piece = from_adaptive(adaptive_gauss_kronrod(
                g,
                start,
                end,
                T::zero(),
                tol * T::lit(0.1),
                PANEL_SUBDIVISIONS,
            ));
            doubling = doubling.combine(piece);
            lobe = lobe + piece.value;
            if end < hi {
                let base = partial_sums.last().copied().unwrap_or(head.value);
                partial_sums.push(base + lobe);
                lobe = T::zero();
            }
            start = end;
        }
        total = total.combine(doubling);
        magnitudes.push(doubling.magnitude);

        if negligible(doubling.magnitude, total.magnitude, tol) {
            quiet += 1;
            if quiet >= 2 {
                return total;
            }
            continue;
        }
        quiet = 0;

        if let Trend::Growing = trend(&magnitudes) {
            if j + 1 >= opts.divergence_doublings {
                debug!("oscillatory lobes keep growing up to x = {hi}; diverged");
                total.diverged = true;
                total.converged = false;
                return total;
            }
        }
    }

    // No decay within the scanned range: extrapolate the lobe sums.
    let (value, err) = wynn_epsilon(&partial_sums);
    debug!("oscillatory tail extrapolated: {value} ± {err}");
    total.value = value;
    total.abs_error_estimate = total.abs_error_estimate + err;
    total.converged = total.converged && err <= tol * total.scale();
    total
}

fn bisect_sign_change<T: Real, G: Fn(T) -> T>(g: &G, mut a: T, mut b: T, va: T) -> T {
    let positive = va > T::zero();
    for _ in 0..60 {
        let m = (a + b) / T::lit(2.0);
        if !(m > a && m < b) {
            break;
        }
        let vm = g(m);
        if !vm.is_finite() {
            break;
        }
        if (vm > T::zero()) == positive {
            a = m;
        } else {
            b = m;
        }
        if (b - a) <= T::lit(1e-12) * b.abs() {
            break;
        }
    }
    (a + b) / T::lit(2.0)
}
