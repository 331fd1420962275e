//! Model and payoff behavior: constructor guards, the spot-coordinate
//! bijection, eigenvalues, and the payoff's analytic landmarks.

use powervar::{adaptive_integrate_s, GammaPayoff, PowerVarianceModel};

fn reference_model() -> PowerVarianceModel<f64> {
    PowerVarianceModel::new(0.05, 0.2, 3.0).unwrap()
}

fn reference_payoff() -> GammaPayoff<f64> {
    GammaPayoff::new(1.0, 0.05, 2.0).unwrap()
}

#[test]
fn model_constructor_rejects_bad_parameters() {
    let cases: [(f64, f64, f64, &str); 7] = [
        (0.0, 0.2, 3.0, "NONPOSITIVE_RATE"),
        (-0.05, 0.2, 3.0, "NONPOSITIVE_RATE"),
        (0.05, 0.0, 3.0, "NONPOSITIVE_SIGMA"),
        (0.05, 0.2, 2.0, "K_OUT_OF_RANGE"),
        (0.05, 0.2, 1.5, "K_OUT_OF_RANGE"),
        (f64::NAN, 0.2, 3.0, "NONPOSITIVE_RATE"),
        (0.05, 0.2, f64::INFINITY, "K_OUT_OF_RANGE"),
    ];
    for (r, sigma, k, code) in cases {
        let err = PowerVarianceModel::new(r, sigma, k).unwrap_err();
        assert_eq!(err.code(), code, "({r}, {sigma}, {k})");
    }
    // Just above the boundary is fine.
    assert!(PowerVarianceModel::new(0.05, 0.2, 2.0 + 1e-9).is_ok());
}

#[test]
fn payoff_constructor_rejects_bad_parameters() {
    assert_eq!(
        GammaPayoff::<f64>::new(0.0, 0.05, 2.0).unwrap_err().code(),
        "NONPOSITIVE_SCALE"
    );
    assert_eq!(
        GammaPayoff::<f64>::new(1.0, 0.0, 2.0).unwrap_err().code(),
        "NONPOSITIVE_DECAY"
    );
    assert_eq!(
        GammaPayoff::<f64>::new(1.0, 0.05, -1.0).unwrap_err().code(),
        "SHAPE_TOO_SMALL"
    );
    // Shape may sit anywhere above -1.
    assert!(GammaPayoff::<f64>::new(1.0, 0.05, -0.5).is_ok());
}

#[test]
fn coordinate_map_round_trips_across_decades() {
    let model = reference_model();
    let mut s = 1e-6f64;
    while s < 1e7 {
        let u = model.u_of_s(s).unwrap();
        let back = model.s_of_u(u).unwrap();
        assert!(
            (back - s).abs() / s < 1e-12,
            "round trip failed at s = {s}: {back}"
        );
        s *= 10.0;
    }
}

#[test]
fn coordinate_map_is_decreasing_in_spot() {
    // Larger spot means smaller u for every k > 2.
    for &k in &[2.5f64, 3.0, 4.0, 7.0] {
        let model = PowerVarianceModel::new(0.05, 0.2, k).unwrap();
        let mut last = model.u_of_s(0.01f64).unwrap();
        for &s in &[0.1f64, 1.0, 10.0, 100.0, 1000.0] {
            let u = model.u_of_s(s).unwrap();
            assert!(u < last, "u not decreasing at k = {k}, s = {s}");
            last = u;
        }
    }
}

#[test]
fn coordinate_map_k4_matches_bisection_inverse() {
    // For k = 4 invert u = c / s^2 by bisection and compare against the
    // closed-form inverse the model uses.
    let model = PowerVarianceModel::new(0.05, 0.2, 4.0).unwrap();
    let c = 2.0 * 0.05 / (2.0 * 0.04);
    for &u in &[1e-4f64, 0.1, 1.0, 25.0, 1e4] {
        let (mut lo, mut hi) = (1e-12f64, 1e12f64);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if c / (mid * mid) > u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let want = (lo * hi).sqrt();
        let got = model.s_of_u(u).unwrap();
        assert!(
            (got - want).abs() / want < 1e-10,
            "u = {u}: {got} vs {want}"
        );
    }
}

#[test]
fn reference_model_derived_quantities_are_exact() {
    let model = reference_model();
    // k - 2 = 1 makes the order exact; the scale 2 r / sigma^2 = 2.5 picks
    // up one rounding step from the squared volatility.
    assert_eq!(model.laguerre_alpha(), 1.0);
    assert!((model.u_scale() - 2.5).abs() < 1e-15);
    // u(S) = 2.5 / S at k = 3.
    assert!((model.u_of_s(60.0).unwrap() - 2.5 / 60.0).abs() < 1e-16);
    assert!((model.s_of_u(2.5 / 60.0).unwrap() - 60.0).abs() < 1e-13);
}

#[test]
fn eigenvalues_are_exact_and_strictly_decreasing() {
    let model = reference_model();
    // lambda_n = -r (n (k - 2) + 1) = -0.05 (n + 1) at the reference point.
    for n in 0..10usize {
        let want = -0.05 * (n as f64 + 1.0);
        assert_eq!(model.eigenvalue(n), want, "n = {n}");
    }
    for &k in &[2.5f64, 3.0, 5.0] {
        let m = PowerVarianceModel::new(0.03, 0.4, k).unwrap();
        for n in 0..20usize {
            assert!(m.eigenvalue(n + 1) < m.eigenvalue(n));
        }
        assert!(m.eigenvalue(0) < 0.0);
    }
}

#[test]
fn mode_discount_decays_from_one() {
    let model = reference_model();
    assert_eq!(model.mode_discount(3, 0.0f64), 1.0);
    for n in 0..6usize {
        let d = model.mode_discount(n, 2.0f64);
        assert!(d > 0.0 && d < 1.0);
        assert_eq!(d, (model.eigenvalue(n) * 2.0).exp());
    }
}

#[test]
fn payoff_peak_location_and_height_match_closed_forms() {
    let payoff = reference_payoff();
    // Peak at (p + 1) / decay = 60; height computed independently to
    // 40 digits: 0.67212542296616323.
    assert_eq!(payoff.peak_spot(), 60.0);
    let peak = payoff.value(60.0f64);
    assert!((peak - 0.6721254229661632).abs() < 1e-15);
    // The peak really is a maximum on the grid around it.
    assert!(payoff.value(59.9f64) < peak);
    assert!(payoff.value(60.1f64) < peak);
}

#[test]
fn payoff_integrates_to_scale_times_mean() {
    // Integral over (0, inf) equals A (p + 1) / decay = 60 exactly for the
    // reference parameters; the adaptive quadrature should land on it.
    let payoff = reference_payoff();
    let total =
        adaptive_integrate_s(|s| payoff.value(s), 0.0f64, f64::INFINITY, 1e-11).unwrap();
    assert!((total - 60.0).abs() / 60.0 < 1e-9, "integral = {total}");
}

#[test]
fn payoff_vanishes_at_and_below_the_origin() {
    let payoff = reference_payoff();
    assert_eq!(payoff.value(0.0f64), 0.0);
    assert_eq!(payoff.value(-5.0f64), 0.0);
    assert_eq!(payoff.value(f64::NAN), 0.0);
    // Fractional shapes put an integrable singularity at the origin but the
    // limit from the right is still finite for p > 0.
    let steep = GammaPayoff::new(1.0, 0.05, 0.5).unwrap();
    assert!(steep.value(1e-300f64).is_finite());
}

#[test]
fn payoff_scales_linearly_in_amplitude() {
    let base = reference_payoff();
    let tripled = GammaPayoff::new(3.0, 0.05, 2.0).unwrap();
    for &s in &[1.0f64, 30.0, 60.0, 250.0] {
        let a = base.value(s);
        let b = tripled.value(s);
        assert!((b - 3.0 * a).abs() <= 1e-15 * b.abs());
    }
}
