use proptest::prelude::*;

use pssmp::montecarlo::{empirical_laplace_values, ks_two_sample, run_with_workers, SimConfig, SimMode};
use pssmp::occupation::OccupationEvaluator;
use pssmp::scale::{overshoot_transform, ruin_probability, ScaleFunction, ScaleMethod};
use pssmp::series::SeriesEvaluator;
use pssmp::specials::{eval_special, SpecialFnParams};
use pssmp::{Component, LevyExponent, Preset};

fn preset() -> impl Strategy<Value = Preset> {
    prop_oneof![
        (0.5..6.0f64).prop_map(|nu| Preset::Bessel { nu }),
        (1.0..6.0f64, 0.05..0.95f64).prop_map(|(nu, f)| Preset::KilledBessel { nu, kappa: f * nu }),
        (1.05..1.95f64).prop_map(|alpha| Preset::Stable { alpha }),
        (1.05..1.95f64, 0.2..3.0f64).prop_map(|(alpha, beta)| Preset::TeeStable { alpha, beta }),
        (2.0..5.0f64, 0.1..3.0f64).prop_map(|(gamma, kappa)| Preset::Sawtooth { gamma, kappa }),
    ]
}

/// Families with ψ'(0+) > 0 and no killing, so the exponent itself has a
/// closed-form scale function.
fn rational_transient() -> impl Strategy<Value = LevyExponent> {
    prop_oneof![
        (0.2..3.0f64, 0.1..2.0f64).prop_map(|(s2, b)| LevyExponent::quadratic(s2, b).unwrap()),
        (2.0..5.0f64, 0.1..0.9f64).prop_map(|(g, k)| Preset::Sawtooth { gamma: g, kappa: k }.exponent().unwrap()),
        (1.0..5.0f64, 0.05..0.95f64)
            .prop_map(|(nu, f)| Preset::KilledBessel { nu, kappa: f * nu }.exponent().unwrap().tee_transform(2.0).unwrap()),
    ]
}

fn grid(n: usize, hi: f64) -> Vec<f64> {
    (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tee_composition(p in preset(), beta in prop::sample::select(vec![0.5, 1.0, 2.0]), gamma in prop::sample::select(vec![0.5, 1.0, 2.0])) {
        let psi = p.exponent().unwrap();
        let nested = psi.tee_transform(gamma).unwrap().tee_transform(beta).unwrap();
        let direct = psi.tee_transform(beta + gamma).unwrap();
        for u in grid(50, 10.0) {
            let (n, d) = (nested.evaluate(u).unwrap(), direct.evaluate(u).unwrap());
            prop_assert!(close(n, d, 1e-12), "u = {u}: {n} vs {d}");
        }
    }

    #[test]
    fn tee_is_linear(p in preset(), q in preset(), a in 0.1..3.0f64, b in 0.1..3.0f64, beta in 0.1..3.0f64) {
        // sums need wrapper-free parts
        prop_assume!(!matches!(p, Preset::TeeStable { .. }) && !matches!(q, Preset::TeeStable { .. }));
        let (p1, p2) = (p.exponent().unwrap(), q.exponent().unwrap());
        let sum = p1.scaled(a).unwrap().plus(&p2.scaled(b).unwrap()).unwrap();
        let lhs = sum.tee_transform(beta).unwrap();
        let (t1, t2) = (p1.tee_transform(beta).unwrap(), p2.tee_transform(beta).unwrap());
        for u in grid(25, 10.0) {
            let expect = a * t1.evaluate(u).unwrap() + b * t2.evaluate(u).unwrap();
            prop_assert!(close(lhs.evaluate(u).unwrap(), expect, 1e-12));
        }
    }

    #[test]
    fn tee_preserves_validity(p in preset(), beta in 0.05..4.0f64) {
        let t = p.exponent().unwrap().tee_transform(beta).unwrap();
        let d = t.validate(&grid(101, 10.0));
        prop_assert!(d.is_convex(), "{d:?}");
        prop_assert_eq!(d.value_at_zero, 0.0);
        prop_assert_eq!(d.killing_rate, 0.0);
    }

    #[test]
    fn zero_parameter_transforms_are_identities(p in preset(), u in 0.0..20.0f64) {
        let psi = p.exponent().unwrap();
        let v = psi.evaluate(u).unwrap();
        prop_assert_eq!(psi.esscher(0.0).unwrap().evaluate(u).unwrap(), v);
        prop_assert_eq!(psi.tee_transform(0.0).unwrap().evaluate(u).unwrap(), v);
    }

    #[test]
    fn largest_root_is_a_root(p in preset()) {
        let psi = p.exponent().unwrap();
        let theta = psi.largest_root().unwrap();
        if theta > 0.0 {
            prop_assert!(psi.evaluate(theta).unwrap().abs() < 1e-10);
            prop_assert!(psi.evaluate(theta + 1e-6).unwrap() > 0.0);
        }
        if let Some((plus, _)) = p.killed_bessel_roots() {
            prop_assert!((theta - plus).abs() < 1e-10);
        }
    }

    #[test]
    fn hitting_monotone_and_self_similar(p in preset(), x in 0.0..1.0f64, a in 0.5..3.0f64, q in 0.0..5.0f64) {
        let psi = p.exponent().unwrap();
        let alpha = p.natural_index();
        let Ok(se) = SeriesEvaluator::new(psi, alpha) else { return Ok(()) };
        let xa = x * a;
        let base = se.hitting_laplace(xa, a, q).unwrap();
        prop_assert!(base > 0.0 && base <= 1.0);
        prop_assert!(se.hitting_laplace(xa, a, q + 0.5).unwrap() <= base);
        prop_assert!(se.hitting_laplace(xa, a * 1.2, q).unwrap() <= base * (1.0 + 1e-15));
        prop_assert!(se.hitting_laplace(xa * 0.9, a, q).unwrap() <= base * (1.0 + 1e-15));
        let scaled = se.hitting_laplace(x, 1.0, q * a.powf(alpha)).unwrap();
        prop_assert!((scaled - base).abs() <= 1e-14 * base);
    }

    #[test]
    fn tail_bound_holds(p in preset(), z in 0.0..50.0f64) {
        let psi = p.exponent().unwrap();
        let Ok(se) = SeriesEvaluator::new(psi, p.natural_index()) else { return Ok(()) };
        let v = se.eval(z).unwrap();
        // 50 more terms summed directly from the coefficients
        let coeffs = se.coefficients(v.terms_used + 50).unwrap();
        let extra: f64 = (v.terms_used..v.terms_used + 50).map(|n| coeffs[n] * z.powi(n as i32)).sum();
        prop_assert!(extra <= v.tail_bound + 1e-15 * v.value, "extra {extra} bound {}", v.tail_bound);
    }

    #[test]
    fn scale_monotone_and_ruin_in_range(e in rational_transient()) {
        let w = ScaleFunction::new(e, ScaleMethod::Auto).unwrap();
        let mut prev = 0.0;
        for x in grid(200, 8.0) {
            let v = w.eval(x).unwrap();
            prop_assert!(v >= prev - 1e-15, "x = {x}");
            prev = v;
        }
        for x in [0.0, 0.3, 1.0, 4.0] {
            let o0 = overshoot_transform(&w, x, 0.0).unwrap();
            prop_assert_eq!(o0, 1.0 - w.slope_at_zero() * w.eval(x).unwrap());
            for u in [0.5, 1.0, 2.0] {
                let o = overshoot_transform(&w, x, u).unwrap();
                prop_assert!(o >= -1e-9 && o <= (u * x).exp() + 1e-9, "x = {x}, u = {u}: {o}");
            }
        }
    }

    #[test]
    fn ruin_probability_monotone(nu in 0.5..6.0f64) {
        let psi = Preset::Bessel { nu }.exponent().unwrap();
        let mut prev = 0.0;
        for y in [1.0, 1.2, 1.5, 2.0, 3.0, 10.0, 100.0] {
            let r = ruin_probability(&psi, 2.0, y).unwrap();
            prop_assert!((0.0..=1.0).contains(&r));
            prop_assert!(r >= prev);
            prop_assert!((r - (1.0 - y.powf(-nu))).abs() < 1e-12);
            prev = r;
        }
    }

    #[test]
    fn mittag_leffler_degeneracies(x in 0.0..50.0f64) {
        let e11 = eval_special(&SpecialFnParams::MittagLeffler { alpha: 1.0, beta: 1.0 }, x).unwrap();
        prop_assert!((e11 - x.exp()).abs() <= 1e-13 * x.exp());
        let e21 = eval_special(&SpecialFnParams::MittagLeffler { alpha: 2.0, beta: 1.0 }, x).unwrap();
        prop_assert!((e21 - x.sqrt().cosh()).abs() <= 1e-13 * e21);
    }

    #[test]
    fn empirical_laplace_at_zero_is_one(samples in prop::collection::vec(0.0..100.0f64, 1..200)) {
        let e = &empirical_laplace_values(&samples, &[0.0])[0];
        prop_assert_eq!(e.mean, 1.0);
    }

    #[test]
    fn ks_is_symmetric(a in prop::collection::vec(-5.0..5.0f64, 100..300), b in prop::collection::vec(-5.0..5.0f64, 100..300)) {
        let (ab, ba) = (ks_two_sample(&a, &b).unwrap(), ks_two_sample(&b, &a).unwrap());
        prop_assert_eq!(ab.statistic, ba.statistic);
        prop_assert!(ab.p_value >= 0.0 && ab.p_value <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn occupation_monotone_and_self_similar(
        which in 0usize..3,
        x in 0.0..6.0f64,
        a in 0.5..2.0f64,
        q in 0.1..3.0f64,
    ) {
        let (preset, alpha) = [("bessel:3", 2.0), ("sawtooth:3,1", 1.0), ("killed-bessel:3,1", 2.0)][which];
        let psi = preset.parse::<Preset>().unwrap().exponent().unwrap();
        let ev = OccupationEvaluator::new(psi, alpha).unwrap();
        let o = ev.occupation_laplace(x * a, a, q).unwrap();
        prop_assert!(o > 0.0 && o <= 1.0);
        prop_assert!(ev.occupation_laplace(x * a, a, q * 1.5).unwrap() <= o + 1e-12);
        if x >= 1.0 {
            prop_assert!(ev.occupation_laplace(x * a * 1.3, a, q).unwrap() >= o - 1e-10);
        }
        let unit = ev.occupation_laplace(x, 1.0, q * a.powf(alpha)).unwrap();
        prop_assert!((unit - o).abs() < 1e-10, "{unit} vs {o}");
    }

    #[test]
    fn ensembles_do_not_depend_on_workers(seed in any::<u64>(), workers in 2usize..5) {
        let psi = LevyExponent::new(vec![
            Component::Quadratic { sigma2: 1.0, drift: 0.8 },
            Component::CpExpJumps { rate: 0.5, jump_scale: 2.0 },
        ]).unwrap();
        let cfg = SimConfig::new(psi, 2.0, 0.2, 1.0, 2e-3, 48, seed).with_mode(SimMode::Occupation);
        let one = run_with_workers(&cfg, Some(1)).unwrap();
        let many = run_with_workers(&cfg, Some(workers)).unwrap();
        prop_assert_eq!(one, many);
    }
}
