//! Gauss–Legendre panels and adaptive Gauss–Kronrod (7/15) integration.

use crate::scalar::Real;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds the `order`-point rule: Newton on the three-term recurrence,
    /// started in `f64` and finished in `T` so wider scalars get full accuracy.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            let mut x = T::lit(x);
            let tiny = T::epsilon() * T::lit(4.0);
            for _ in 0..8 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= tiny {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Integrates `f` over `[a, b]`, returning `(∫f, ∫|f|)`.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F, a: T, b: T) -> (T, T) {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let mut sum = T::zero();
        let mut abs = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            sum = sum + w * v;
            abs = abs + w * v.abs();
        }
        (sum * half, abs * half.abs())
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let k = T::lit(k as f64);
        let p2 = ((k + k - T::one()) * x * p1 - (k - T::one()) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::lit(n as f64);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

// G7/K15 abscissae and weights as unevaluated sums `hi + lo` of two doubles,
// accurate to about 32 digits.
const XGK: [(f64, f64); 8] = [
    (0.9914553711208126, 2.7322067495382985e-17),
    (0.9491079123427585, 3.82579658786657e-17),
    (0.8648644233597691, -2.3887783447584197e-17),
    (0.7415311855993945, -2.0220134774069897e-17),
    (0.5860872354676911, -1.7466970805984817e-17),
    (0.4058451513773972, -1.72492754475471e-17),
    (0.20778495500789848, -1.322698778629045e-17),
    (0.0, 0.0),
];
const WGK: [(f64, f64); 8] = [
    (0.022935322010529224, 5.957180517223158e-19),
    (0.06309209262997856, -4.536585404360517e-18),
    (0.10479001032225019, -3.90658597958814e-18),
    (0.14065325971552592, -2.484164787968961e-19),
    (0.1690047266392679, -7.56643290985809e-18),
    (0.19035057806478542, -9.616513280901216e-18),
    (0.20443294007529889, 6.740401802865974e-18),
    (0.20948214108472782, 9.321252782204223e-18),
];
const WG: [(f64, f64); 4] = [
    (0.1294849661688697, -9.625448970284404e-18),
    (0.27970539148927664, 2.3267180221717138e-17),
    (0.3818300505051189, 2.1862747923824822e-17),
    (0.4179591836734694, -1.5497807119257288e-17),
];

fn constant<T: Real>((hi, lo): (f64, f64)) -> T {
    T::lit(hi) + T::lit(lo)
}

/// One 15-point Gauss–Kronrod panel.
#[derive(Debug, Clone, Copy)]
pub struct KronrodPanel<T> {
    pub a: T,
    pub b: T,
    pub value: T,
    pub error: T,
    pub abs_value: T,
    pub nonfinite: usize,
}

/// Applies the G7/K15 pair on `[a, b]`. Non-finite samples contribute zero
/// and are counted.
pub fn gauss_kronrod15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> KronrodPanel<T> {
    let two = T::lit(2.0);
    let center = (a + b) / two;
    let half = (b - a) / two;
    let abs_half = half.abs();
    let mut nonfinite = 0usize;
    let mut eval = |x: T| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            nonfinite += 1;
            T::zero()
        }
    };

    let xgk: [T; 8] = XGK.map(constant);
    let wgk: [T; 8] = WGK.map(constant);
    let wg: [T; 4] = WG.map(constant);

    let fc = eval(center);
    let mut res_g = fc * wg[3];
    let mut res_k = fc * wgk[7];
    let mut res_abs = fc.abs() * wgk[7];
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * xgk[j];
        let f1 = eval(center - dx);
        let f2 = eval(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = wgk[j];
        res_k = res_k + wk * (f1 + f2);
        res_abs = res_abs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + wg[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k / two;
    let mut res_asc = wgk[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + wgk[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != T::zero() && error != T::zero() {
        let scale = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = res_asc * scale.min(T::one());
    }
    let underflow = T::min_positive_value() / (T::lit(50.0) * T::epsilon());
    if res_abs > underflow {
        error = error.max(T::lit(50.0) * T::epsilon() * res_abs);
    }
    KronrodPanel {
        a,
        b,
        value,
        error,
        abs_value: res_abs,
        nonfinite,
    }
}

/// Outcome of [`adaptive_gauss_kronrod`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOutcome<T> {
    pub value: T,
    pub error: T,
    /// Estimate of `∫|f|` over the interval.
    pub abs_value: T,
    pub converged: bool,
    pub nonfinite: usize,
    pub evaluations: usize,
}

/// Globally adaptive bisection with the G7/K15 pair, stopping once the
/// summed error is at most `max(abs_tol, rel_tol · ∫|f|)`.
pub fn adaptive_gauss_kronrod<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_subdivisions: usize,
) -> AdaptiveOutcome<T> {
    let mut panels = vec![gauss_kronrod15(f, a, b)];
    let mut evaluations = 15;
    loop {
        let value = panels.iter().fold(T::zero(), |s, p| s + p.value);
        let error = panels.iter().fold(T::zero(), |s, p| s + p.error);
        let abs_value = panels.iter().fold(T::zero(), |s, p| s + p.abs_value);
        let nonfinite = panels.iter().map(|p| p.nonfinite).sum();
        let tol = abs_tol.max(rel_tol * abs_value);
        let done = error <= tol;
        if done || panels.len() >= max_subdivisions {
            return AdaptiveOutcome {
                value,
                error,
                abs_value,
                converged: done && nonfinite == 0,
                nonfinite,
                evaluations,
            };
        }
        let (worst, _) =
            panels
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |(bi, be), (i, p)| {
                    if p.error > be {
                        (i, p.error)
                    } else {
                        (bi, be)
                    }
                });
        let p = panels.swap_remove(worst);
        let mid = (p.a + p.b) / T::lit(2.0);
        if !(mid > p.a && mid < p.b) {
            // Interval exhausted at floating-point resolution.
            let nonfinite = panels.iter().map(|p| p.nonfinite).sum::<usize>() + p.nonfinite;
            panels.push(p);
            let value = panels.iter().fold(T::zero(), |s, p| s + p.value);
            let error = panels.iter().fold(T::zero(), |s, p| s + p.error);
            let abs_value = panels.iter().fold(T::zero(), |s, p| s + p.abs_value);
            return AdaptiveOutcome {
                value,
                error,
                abs_value,
                converged: false,
                nonfinite,
                evaluations,
            };
        }
        panels.push(gauss_kronrod15(f, p.a, mid));
        panels.push(gauss_kronrod15(f, mid, p.b));
        evaluations += 30;
    }
}
