//! Property tests for the invariants of each module.

use std::f64::consts::PI;

use krein_core::quadrature::gauss::gauss_kronrod15;
use krein_core::{
    build_class_halfline, build_class_real, hilbert_numeric, hilbert_symbolic, integrate_improper,
    krein_check_halfline, krein_check_real, lift_to_real_line, member, moment, pv_integrate,
    verify_moments, Density, ImproperDomain, ImproperOptions, KreinStatus, LogDensityExpr,
    PerturbationKind, PvParams, Symmetry,
};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn half_line_family_is_normalized(r in 4.2f64..12.0) {
        let f = Density::<f64>::abs_normal_power(r).unwrap();
        let q = f.normalization(1e-10);
        prop_assert!(q.converged);
        prop_assert!((q.value - 1.0).abs() <= 1e-8, "r={r}: {}", q.value);
    }

    #[test]
    fn log_expr_reproduces_density(r in 2.0f64..12.0, x in 1e-3f64..30.0) {
        let f = Density::<f64>::abs_normal_power(r).unwrap();
        let v = f.eval(x);
        prop_assume!(v > f64::MIN_POSITIVE);
        let u = f.log_expr().unwrap();
        prop_assert!(close(u.eval(x).exp(), v, 1e-10));
    }

    #[test]
    fn lift_is_even(r in 2.0f64..12.0, x in 1e-3f64..8.0) {
        let f = Density::<f64>::abs_normal_power(r).unwrap();
        let g = lift_to_real_line(&f).unwrap();
        prop_assert_eq!(g.eval(x), g.eval(-x));
    }

    #[test]
    fn pv_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, t in -0.8f64..2.8) {
        let p = PvParams::for_point(t);
        let (a, b) = (-1.0, 3.0);
        let r1 = pv_integrate(&f64::cos, t, a, b, &p).unwrap();
        let r2 = pv_integrate(&f64::exp, t, a, b, &p).unwrap();
        let g = |x: f64| alpha * x.cos() + beta * x.exp();
        let r = pv_integrate(&g, t, a, b, &p).unwrap();
        let bound = r.abs_error_estimate
            + alpha.abs() * r1.abs_error_estimate
            + beta.abs() * r2.abs_error_estimate
            + 1e-13 * (1.0 + r.value.abs());
        prop_assert!((r.value - (alpha * r1.value + beta * r2.value)).abs() <= bound);
    }

    #[test]
    fn pv_of_constant_on_symmetric_interval_vanishes(t in -50.0f64..50.0, half in 0.01f64..20.0) {
        let p = PvParams::for_point(t);
        let r = pv_integrate(&|_: f64| 1.0, t, t - half, t + half, &p).unwrap();
        prop_assert!(r.value.abs() <= 1e-12, "t={t} half={half}: {}", r.value);
    }

    #[test]
    fn symbolic_transform_is_linear(
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        mu in 0.05f64..0.95,
        t in prop::sample::select(vec![-3.0, -0.7, 0.4, 2.5]),
    ) {
        let u1 = LogDensityExpr::new(0.3, 1.0, [(1.0, mu)]).unwrap();
        let u2 = LogDensityExpr::new(-1.0, 0.5, [(-2.0, -mu / 2.0)]).unwrap();
        let sum = LogDensityExpr::new(
            0.3 * a - b,
            a + 0.5 * b,
            [(a, mu), (-2.0 * b, -mu / 2.0)],
        )
        .unwrap();
        let h1 = hilbert_symbolic(&u1).unwrap();
        let h2 = hilbert_symbolic(&u2).unwrap();
        let combined = h1.clone() * a + h2.clone() * b;
        let direct = hilbert_symbolic(&sum).unwrap();
        prop_assert!(close(combined.eval(t), direct.eval(t), 1e-14));
        prop_assert!(close(combined.eval(t), a * h1.eval(t) + b * h2.eval(t), 1e-14));
    }

    #[test]
    fn numeric_transform_of_even_input_is_odd(mu in 0.1f64..0.9, t in 0.2f64..4.0) {
        let u = |x: f64| -x.abs().powf(mu);
        let plus = hilbert_numeric(u, t, Symmetry::General, &PvParams::for_point(t)).unwrap();
        let minus = hilbert_numeric(u, -t, Symmetry::General, &PvParams::for_point(-t)).unwrap();
        let bound = 2.0 * (plus.abs_error_estimate + minus.abs_error_estimate) + 1e-12;
        prop_assert!((plus.value + minus.value).abs() <= bound);
    }

    #[test]
    fn krein_verdict_commutes_with_lift(r in 1.5f64..10.0) {
        prop_assume!((r - 4.0).abs() > 1e-3);
        let f = Density::<f64>::abs_normal_power(r).unwrap();
        let half = krein_check_halfline(&f).unwrap();
        let real = krein_check_real(&lift_to_real_line(&f).unwrap()).unwrap();
        prop_assert_eq!(half.status == KreinStatus::Finite, real.status == KreinStatus::Finite);
        prop_assert_eq!(half.status == KreinStatus::Finite, r > 4.0);
    }

    #[test]
    fn perturbations_are_bounded(n in 1u32..4, t in -1e6f64..1e6) {
        let f = Density::<f64>::odd_normal_power(n).unwrap();
        for kind in [PerturbationKind::CosH, PerturbationKind::SinH] {
            let class = build_class_real(&f, kind).unwrap();
            prop_assert!(class.perturbation().eval(t).abs() <= 1.0);
        }
    }

    #[test]
    fn members_are_nonnegative(n in 1u32..4, x in -50.0f64..50.0, eps in -1.0f64..=1.0) {
        prop_assume!(x != 0.0);
        let f = Density::<f64>::odd_normal_power(n).unwrap();
        for kind in [PerturbationKind::CosH, PerturbationKind::SinH] {
            let class = build_class_real(&f, kind).unwrap();
            prop_assert!(member(&class, eps).unwrap().eval(x) >= 0.0);
        }
    }
}

#[test]
fn real_line_families_are_normalized() {
    for n in 1..=3 {
        let q = Density::<f64>::odd_normal_power(n)
            .unwrap()
            .normalization(1e-10);
        assert!(
            q.converged && (q.value - 1.0).abs() <= 1e-8,
            "n={n}: {}",
            q.value
        );
    }
}

#[test]
fn lift_moments_match() {
    for r in [5.0, 6.0, 8.0] {
        let f = Density::<f64>::abs_normal_power(r).unwrap();
        let g = lift_to_real_line(&f).unwrap();
        for k in 0..=10u32 {
            let want = moment(&f, k).unwrap();
            let got = moment(&g, 2 * k).unwrap();
            assert!(
                close(got, want, 1e-8) && (got - want).abs() <= 1e-8 * want,
                "r={r} k={k}: {got} vs {want}"
            );
            assert!(moment(&g, 2 * k + 1).unwrap().abs() <= 1e-8 * want.max(1.0));
        }
    }
}

#[test]
fn improper_engine_reproduces_gaussian_moments() {
    for p in 0..=4 {
        let g = |x: f64| x.abs().powi(p) * (-x * x).exp() / PI.sqrt();
        let q = integrate_improper(&g, ImproperDomain::RealLine, &ImproperOptions::new(1e-12));
        let want = statrs::function::gamma::gamma((p as f64 + 1.0) / 2.0) / PI.sqrt();
        assert!(
            q.converged && (q.value - want).abs() <= 1e-9 * want,
            "p={p}: {} vs {want}",
            q.value
        );
    }
}

#[test]
fn sin_perturbation_even_orders_vanish_exactly() {
    let f = Density::<f64>::odd_normal_power(1).unwrap();
    let class = build_class_real(&f, PerturbationKind::SinH).unwrap();
    let report = verify_moments(&class, 8, 1e-7).unwrap();
    for k in (0..=8).step_by(2) {
        assert!(report.perturbation_integrals[k].abs() <= 1e-7, "k={k}");
    }
}

#[test]
fn reports_are_deterministic() {
    let f = Density::<f64>::abs_normal_power(6.0).unwrap();
    let class = build_class_halfline(&f).unwrap();
    let a = serde_json::to_string(&verify_moments(&class, 8, 1e-7).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_moments(&class, 8, 1e-7).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn f64_reports_precision_limited_orders() {
    let f = Density::<f64>::odd_normal_power(2).unwrap();
    let class = build_class_real(&f, PerturbationKind::SinH).unwrap();
    let report = verify_moments(&class, 8, 1e-7).unwrap();
    assert!(!report.pass);
    assert!(report.precision_limited[7]);
    assert!(report.inconclusive[7]);
    assert!(!report.order_pass[7]);
}

#[test]
fn kronrod_rule_is_exact_in_quad_precision() {
    use f128::f128;
    use num_traits::{Float, FromPrimitive};
    let c = |x: f64| f128::from_f64(x).unwrap();
    // degree 22 polynomial: the 15-point Kronrod rule is exact through degree 22
    let g = |x: f128| x.powi(22) + c(3.0) * x.powi(7) - x;
    let panel = gauss_kronrod15(&g, c(0.0), c(1.0));
    let want = c(1.0) / c(23.0) + c(3.0) / c(8.0) - c(0.5);
    assert!(
        (panel.value - want).abs() < c(1e-31),
        "{}",
        (panel.value - want).abs()
    );
}

#[test]
fn quad_precision_certifies_deep_cancellation() {
    use f128::f128;
    use num_traits::{Float, FromPrimitive, ToPrimitive};
    let f = Density::<f128>::odd_normal_power(2).unwrap();
    let class = build_class_real(&f, PerturbationKind::SinH).unwrap();
    let tol = f128::from_f64(1e-7).unwrap();
    let report = verify_moments(&class, 7, tol).unwrap();
    assert!(
        report.pass,
        "{:?}",
        report
            .perturbation_integrals
            .iter()
            .map(|x| x.to_f64())
            .collect::<Vec<_>>()
    );
    assert!(report.members_pass);
    assert!(report.perturbation_integrals[7].abs() <= tol);
}
