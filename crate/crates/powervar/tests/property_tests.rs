//! Randomized invariant checks over the parameter space the constructors
//! admit, not just the reference point.

use powervar::{
    bs_call, bs_put, build_rule, erf, laguerre, log_gamma, monte_carlo_price,
    project_coefficients, GammaPayoff, LaguerreOrder, McConfig, PowerVarianceModel,
};
use proptest::prelude::*;

fn arb_model() -> impl Strategy<Value = PowerVarianceModel<f64>> {
    (0.001f64..0.2, 0.05f64..1.0, 2.1f64..8.0)
        .prop_map(|(r, sigma, k)| PowerVarianceModel::new(r, sigma, k).unwrap())
}

proptest! {
    #[test]
    fn coordinate_map_round_trips(model in arb_model(), s in 1e-3f64..1e4) {
        let u = model.u_of_s(s).unwrap();
        prop_assert!(u > 0.0 && u.is_finite());
        let back = model.s_of_u(u).unwrap();
        prop_assert!((back - s).abs() / s < 1e-10, "{s} -> {u} -> {back}");
    }

    #[test]
    fn coordinate_map_is_order_reversing(
        model in arb_model(),
        s1 in 1e-2f64..1e3,
        bump in 1e-2f64..10.0,
    ) {
        let u1 = model.u_of_s(s1).unwrap();
        let u2 = model.u_of_s(s1 + bump).unwrap();
        prop_assert!(u2 < u1);
    }

    #[test]
    fn eigenvalues_decrease_strictly(model in arb_model(), n in 0usize..64) {
        prop_assert!(model.eigenvalue(0) < 0.0);
        prop_assert!(model.eigenvalue(n + 1) < model.eigenvalue(n));
        // Equal spacing: the gap is r (k - 2) independent of n.
        let gap0 = model.eigenvalue(1) - model.eigenvalue(0);
        let gapn = model.eigenvalue(n + 1) - model.eigenvalue(n);
        prop_assert!((gapn - gap0).abs() <= 1e-12 * gap0.abs());
    }

    #[test]
    fn laguerre_at_zero_matches_the_binomial(
        alpha in -0.9f64..3.0,
        n in 0usize..20,
    ) {
        let ord = LaguerreOrder::new(alpha).unwrap();
        let nf = n as f64;
        let want = (log_gamma(nf + alpha + 1.0).unwrap()
            - log_gamma(nf + 1.0).unwrap()
            - log_gamma(alpha + 1.0).unwrap())
        .exp();
        let got = laguerre(n, ord, 0.0);
        prop_assert!((got - want).abs() / want < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn payoff_is_nonnegative_and_amplitude_linear(
        scale in 1e-6f64..1e6,
        decay in 1e-4f64..10.0,
        shape in -0.9f64..10.0,
        s in -10.0f64..1e4,
    ) {
        let one = GammaPayoff::new(1.0, decay, shape).unwrap();
        let scaled = GammaPayoff::new(scale, decay, shape).unwrap();
        let v = one.value(s);
        prop_assert!(v >= 0.0 && v.is_finite());
        let w = scaled.value(s);
        prop_assert!((w - scale * v).abs() <= 1e-15 * w.max(1e-300));
    }

    #[test]
    fn lognormal_parity_holds_for_random_inputs(
        s in 1.0f64..500.0,
        strike in 1.0f64..500.0,
        r in 0.001f64..0.2,
        sigma in 0.01f64..1.0,
        tau in 0.01f64..10.0,
    ) {
        let c = bs_call(s, strike, r, sigma, tau).unwrap();
        let p = bs_put(s, strike, r, sigma, tau).unwrap();
        let forward = s - strike * (-r * tau).exp();
        prop_assert!((c - p - forward).abs() <= 1e-10 * s.max(strike));
        // Far out of the money the two closed-form terms cancel to roundoff,
        // which can land a hair below zero; anything beyond that is a bug.
        let floor = -1e-12 * s.max(strike);
        prop_assert!(c >= floor && p >= floor);
    }

    #[test]
    fn erf_is_odd_bounded_and_monotone(x in -6.0f64..6.0, step in 1e-6f64..2.0) {
        let v = erf(x);
        prop_assert!(v.abs() <= 1.0);
        prop_assert_eq!(erf(-x), -v);
        // Beyond |x| of about 5.9 the value saturates to exactly +-1 in f64
        // and sub-ulp increments vanish, so strictness is only meaningful
        // while both endpoints stay away from either tail.
        let next = erf(x + step);
        prop_assert!(next >= v);
        if x.abs() < 5.0 && (x + step).abs() < 5.0 {
            prop_assert!(next > v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rule_weights_are_nonnegative_and_sum_to_the_mass(
        alpha in -0.9f64..3.0,
        n in 1usize..64,
    ) {
        let ord = LaguerreOrder::new(alpha).unwrap();
        let rule = build_rule(ord, n).unwrap();
        prop_assert!(rule.weights().iter().all(|&w| w >= 0.0));
        let total: f64 = rule.weights().iter().sum();
        let want = log_gamma(alpha + 1.0).unwrap().exp();
        prop_assert!((total - want).abs() / want < 1e-11);
    }

    #[test]
    fn mc_is_deterministic_for_any_seed(
        seed in any::<u64>(),
        n_paths in 8usize..64,
        n_steps in 1usize..10,
    ) {
        let model = PowerVarianceModel::new(0.05f64, 0.2, 3.0).unwrap();
        let payoff = GammaPayoff::new(1.0, 0.05, 2.0).unwrap();
        let cfg = McConfig { n_paths, n_steps, seed };
        let a = monte_carlo_price(&model, &payoff, 0.0, 60.0, 1.0, &cfg).unwrap();
        let b = monte_carlo_price(&model, &payoff, 0.0, 60.0, 1.0, &cfg).unwrap();
        prop_assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        prop_assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn projection_is_linear_in_the_payoff(
        scale in 0.1f64..100.0,
        decay in 0.5f64..3.0,
    ) {
        let model = PowerVarianceModel::new(0.05, 0.2, 3.0).unwrap();
        let rule = build_rule(LaguerreOrder::new(1.0).unwrap(), 32).unwrap();
        let base = project_coefficients(
            &model,
            &GammaPayoff::new(1.0, decay, 2.0).unwrap(),
            1.0,
            8,
            &rule,
        )
        .unwrap();
        let scaled = project_coefficients(
            &model,
            &GammaPayoff::new(scale, decay, 2.0).unwrap(),
            1.0,
            8,
            &rule,
        )
        .unwrap();
        // Rounding accumulates relative to the largest coefficient, not to
        // each entry: high modes can be tiny differences of large sums.
        let top = base.coefficients().iter().fold(0.0f64, |m, c| m.max(c.abs()));
        for (&a, &b) in base.coefficients().iter().zip(scaled.coefficients()) {
            prop_assert!((b - scale * a).abs() <= 1e-12 * scale * top);
        }
    }

    #[test]
    fn single_modes_discount_exponentially(
        t in 0.0f64..1.0,
        mode in 0usize..8,
    ) {
        let model = PowerVarianceModel::new(0.05, 0.2, 3.0).unwrap();
        let payoff = GammaPayoff::new(1.0, 0.05, 2.0).unwrap();
        let rule = build_rule(LaguerreOrder::new(1.0).unwrap(), 32).unwrap();
        let sol = project_coefficients(&model, &payoff, 1.0, 8, &rule).unwrap();
        let at_t = sol.evaluate_single_mode(mode, t, 60.0).unwrap();
        let at_maturity = sol.evaluate_single_mode(mode, 1.0, 60.0).unwrap();
        let want = at_maturity * model.mode_discount(mode, 1.0 - t);
        prop_assert!((at_t - want).abs() <= 1e-15 * want.abs().max(1e-300));
    }
}
