use mhbesov::coeffs::{c_pq, c_pq_k_all, CoeffRequest};
use mhbesov::quadrature::{build_rule, integrate, integrate_2d};
use mhbesov::radial::{i_pqs, RadialProfile};
use mhbesov::specfun::{gauss_2f1, gauss_2f1_at_1, ln_beta, pochhammer, ratio_series_around_1, rising, HypParams};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

/// Plain Gauss series, used only where it converges geometrically.
fn naive_2f1(a: f64, b: f64, c: f64, t: f64) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 0..2000 {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * t;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_recurrence(a in 0.05f64..40.0, k in 0u32..60) {
        let lhs = pochhammer(a, (k + 1) as f64).unwrap();
        let rhs = (a + k as f64) * pochhammer(a, k as f64).unwrap();
        prop_assert!(close(lhs, rhs, 1e-13), "{lhs} vs {rhs}");
        prop_assert!(close(rising(a, k), pochhammer(a, k as f64).unwrap(), 1e-13));
    }

    #[test]
    fn pochhammer_shift_for_real_order(a in 0.1f64..20.0, k in 0.0f64..30.0) {
        let lhs = pochhammer(a, k + 1.0).unwrap();
        let rhs = (a + k) * pochhammer(a, k).unwrap();
        prop_assert!(close(lhs, rhs, 1e-11), "{lhs} vs {rhs}");
    }

    #[test]
    fn gauss_matches_direct_series_below_one_half(
        a in 0.0f64..8.0, b in 0.0f64..8.0, extra in 0.3f64..6.0, t in 0.0f64..0.5,
    ) {
        let c = a + b + extra;
        let v = gauss_2f1(HypParams::new(a, b, c).unwrap(), t).unwrap();
        prop_assert!(close(v, naive_2f1(a, b, c, t), 1e-12));
    }

    #[test]
    fn euler_transformation(a in 0.0f64..6.0, b in 0.0f64..6.0, extra in 0.5f64..5.0, t in 0.0f64..0.97) {
        // F(a, b; c; t) = (1−t)^{c−a−b} F(c−a, c−b; c; t)
        let c = a + b + extra;
        let lhs = gauss_2f1(HypParams::new(a, b, c).unwrap(), t).unwrap();
        let rhs = (1.0 - t).powf(c - a - b) * gauss_2f1(HypParams::new(c - a, c - b, c).unwrap(), t).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn euler_form_of_the_coefficient_family(s in -0.95f64..6.0, n in 1u32..6) {
        // ₂F₁(s+1, n+s+1; 2n+2s+2; t) = (1−t)^n ₂F₁(n+s+1, s+1; 2n+2s+2; t) with c−a−b = n
        let (a, b, c) = (s + 1.0, n as f64 + s + 1.0, 2.0 * (n as f64 + s + 1.0));
        for i in 1..=9 {
            let t = i as f64 / 10.0;
            let direct = naive_2f1(a, b, c, t);
            let euler = (1.0 - t).powi(n as i32) * naive_2f1(c - a, c - b, c, t);
            let lib = gauss_2f1(HypParams::new(a, b, c).unwrap(), t).unwrap();
            prop_assert!(close(direct, euler, 1e-11), "t = {t}: {direct} vs {euler}");
            prop_assert!(close(direct, lib, 1e-11), "t = {t}: {direct} vs {lib}");
        }
    }

    #[test]
    fn gauss_is_continuous_at_one(a in 0.0f64..6.0, b in 0.0f64..6.0, extra in 0.5f64..4.0) {
        // F(1) − F(1−ε) shrinks like ε^min(extra, 1), up to a log factor
        let p = HypParams::new(a, b, a + b + extra).unwrap();
        let at_1 = gauss_2f1_at_1(p).unwrap();
        let mut prev = f64::INFINITY;
        for k in 2..=6 {
            let gap = at_1 - gauss_2f1(p, 1.0 - 10f64.powi(-k)).unwrap();
            prop_assert!(gap >= 0.0 && gap <= prev, "k = {k}: gap {gap} after {prev}");
            prev = gap;
        }
        prop_assert!(prev <= 1e-2 * at_1);
    }

    #[test]
    fn ratio_series_matches_direct_ratio(p in 1u32..12, q in 1u32..12, frac in 0.02f64..0.98, n in 0u32..5, u in 0.0f64..0.95) {
        let nf = n as f64 + frac;
        let params = HypParams::new(p as f64, q as f64, (p + q) as f64 + nf).unwrap();
        let direct = gauss_2f1(params, 1.0 - u).unwrap() / gauss_2f1_at_1(params).unwrap();
        let series = ratio_series_around_1(p, q, nf, u).unwrap();
        prop_assert!(close(direct, series, 1e-10), "{direct} vs {series}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rules_integrate_polynomials_exactly(
        order in 2usize..24, alpha in -0.9f64..4.0, beta in -0.9f64..4.0, seed in prop::collection::vec(-1.0f64..1.0, 48),
    ) {
        let rule = build_rule(order, alpha, beta).unwrap();
        let coefs = &seed[..2 * order];
        let got = rule.apply(|t| coefs.iter().rev().fold(0.0, |acc, c| acc * t + c));
        let moments: Vec<f64> = (0..2 * order).map(|k| ln_beta(beta + k as f64 + 1.0, alpha + 1.0).exp()).collect();
        let want: f64 = coefs.iter().zip(&moments).map(|(c, m)| c * m).sum();
        let scale: f64 = coefs.iter().zip(&moments).map(|(c, m)| (c * m).abs()).sum();
        prop_assert!((got - want).abs() <= 1e-12 * scale, "{got} vs {want}");
    }

    #[test]
    fn tighter_tolerance_never_loosens_the_estimate(lambda in -6.0f64..6.0, alpha in -0.5f64..3.0, beta in -0.5f64..3.0) {
        let f = |t: f64| (lambda * t).exp() / (1.5 + t);
        let loose = integrate(f, alpha, beta, 1e-6).unwrap();
        let tight = integrate(f, alpha, beta, 1e-12).unwrap();
        prop_assert!(tight.err_est <= loose.err_est.max(1e-12 * tight.value.abs()));
        prop_assert!((loose.value - tight.value).abs() <= 1e-6 * tight.value.abs());
    }

    #[test]
    fn tensor_rule_is_the_iterated_rule(a in -3.0f64..3.0, b in -3.0f64..3.0, ex in (-0.5f64..2.0, -0.5f64..2.0), ey in (-0.5f64..2.0, -0.5f64..2.0)) {
        let two = integrate_2d(|x, y| (a * x).exp() * (1.0 + b * y * y), ex, ey, 1e-12).unwrap();
        let fx = integrate(|x| (a * x).exp(), ex.0, ex.1, 1e-13).unwrap().value;
        let fy = integrate(|y| 1.0 + b * y * y, ey.0, ey.1, 1e-13).unwrap().value;
        prop_assert!(close(two.value, fx * fy, 1e-10), "{} vs {}", two.value, fx * fy);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn profile_lies_between_its_value_at_zero_and_one(n in 1u32..5, p in 0u32..12, q in 0u32..12, t in 0.0f64..1.0) {
        let prof = RadialProfile::new(n as f64, p, q).unwrap();
        let s = prof.s_pq(t).unwrap();
        let lo = prof.normalization();
        prop_assert!(s >= lo * (1.0 - 1e-13) && s <= 1.0 + 1e-13, "S({t}) = {s} outside [{lo}, 1]");
    }

    #[test]
    fn radial_factor_is_increasing(n in 1u32..5, p in 0u32..12, q in 0u32..12, r in 0.0f64..0.99, dr in 1e-3f64..1e-2) {
        let prof = RadialProfile::new(n as f64, p, q).unwrap();
        let a = prof.radial_factor(r).unwrap();
        let b = prof.radial_factor((r + dr).min(1.0)).unwrap();
        prop_assert!(b >= a, "{a} then {b}");
    }

    #[test]
    fn i_ratio_bounds(n in 2u32..4, p in 0u32..10, q in 1u32..10, s in -0.8f64..3.0, k in 1u32..4) {
        let i0 = i_pqs(n as f64, 0, p, q, s, 1e-12).unwrap().value;
        let ik = i_pqs(n as f64, k, p, q, s, 1e-12).unwrap().value;
        let lower = rising(1.0, k) / rising(s + 2.0, k);
        let r = ik / i0;
        prop_assert!(r >= lower * (1.0 - 1e-8) && r <= 1.0 + 1e-8, "ratio {r}, lower {lower}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coefficients_are_symmetric(n in 1u32..5, p in 0u32..16, q in 0u32..16, s in -0.9f64..4.0) {
        let a = c_pq(&CoeffRequest::new(n, p, q, s)).unwrap().value;
        let b = c_pq(&CoeffRequest::new(n, q, p, s)).unwrap().value;
        prop_assert!(close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn zeroth_sobolev_coefficient_is_the_bergman_coefficient(n in 1u32..4, p in 0u32..10, q in 0u32..10, s in -0.5f64..3.0) {
        let c0 = c_pq_k_all(n, p, q, 0, s, 1e-12).unwrap()[0].value;
        let scale = rising(s + 1.0, n) / rising(1.0, n - 1);
        let c = c_pq(&CoeffRequest::new(n, p, q, s).with_tol(1e-12)).unwrap().value;
        prop_assert!(close(scale * c0, c, 1e-9), "{} vs {c}", scale * c0);
    }
}
