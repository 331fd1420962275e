//! Accuracy tests for the special-function kernels against independently
//! computed high-precision values and against structural identities.

use powervar::{erf, laguerre, log_gamma, whittaker_m, LaguerreOrder};

fn rel_close(got: f64, want: f64, tol: f64, ctx: &str) {
    let scale = want.abs().max(1e-300);
    let rel = (got - want).abs() / scale;
    assert!(rel <= tol, "{ctx}: got {got}, want {want}, rel {rel:e}");
}

#[test]
fn log_gamma_matches_reference_values() {
    // 40-digit reference values, rounded to f64.
    let cases = [
        (0.1, 2.2527126517342059),
        (0.5, 0.5723649429247001),
        (1.0, 0.0),
        (2.0, 0.0),
        (2.5, 0.28468287047291916),
        (10.0, 12.80182748008147),
        (100.0, 359.1342053695754),
        // The largest argument the projection normalization ever needs:
        // n + alpha + 1 for n = 512 and a steep exponent.
        (577.5, 3092.393854095797),
    ];
    for (x, want) in cases {
        rel_close(log_gamma(x).unwrap(), want, 1e-13, &format!("log_gamma({x})"));
    }
    // Exact zeros at 1 and 2 should be hit to absolute precision.
    assert!(log_gamma(1.0f64).unwrap().abs() < 1e-14);
    assert!(log_gamma(2.0f64).unwrap().abs() < 1e-14);
}

#[test]
fn log_gamma_rejects_the_nonpositive_axis() {
    assert_eq!(log_gamma(0.0f64).unwrap_err().code(), "BAD_DOMAIN");
    assert_eq!(log_gamma(-1.5f64).unwrap_err().code(), "BAD_DOMAIN");
    assert_eq!(log_gamma(f64::NAN).unwrap_err().code(), "BAD_DOMAIN");
    assert_eq!(log_gamma(f64::INFINITY).unwrap_err().code(), "BAD_DOMAIN");
}

#[test]
fn erf_matches_reference_values() {
    let cases: [(f64, f64); 6] = [
        (0.0, 0.0),
        (0.5, 0.5204998778130465),
        (1.0, 0.8427007929497149),
        (2.5, 0.999593047982555),
        (3.0, 0.9999779095030014),
        (5.0, 0.9999999999984626),
    ];
    for (x, want) in cases {
        let got = erf(x);
        assert!(
            (got - want).abs() <= 1e-12,
            "erf({x}): got {got}, want {want}"
        );
        // Odd symmetry is structural, not approximate.
        assert_eq!(erf(-x), -got);
    }
    assert!((erf(30.0f64) - 1.0).abs() < 1e-15);
}

#[test]
fn erf_is_monotone_across_the_series_cf_seam() {
    // The switch sits at 2.5; any mismatch between branches would show as a
    // non-monotone step in a fine sweep through it.
    let mut last = erf(2.4f64);
    let mut x = 2.4f64;
    while x < 2.6 {
        x += 1e-3;
        let v = erf(x);
        assert!(v >= last, "erf not monotone at {x}");
        last = v;
    }
}

#[test]
fn laguerre_derivative_identity_holds() {
    // d/dx L_n^(a) = -L_{n-1}^(a+1), checked with central differences.
    for &alpha in &[0.5f64, 1.0] {
        let ord = LaguerreOrder::new(alpha).unwrap();
        let ord_up = LaguerreOrder::new(alpha + 1.0).unwrap();
        for n in 1..=8usize {
            for &x in &[0.3f64, 1.0, 5.0, 20.0] {
                let h = 1e-5 * x.max(1.0);
                let num = (laguerre(n, ord, x + h) - laguerre(n, ord, x - h)) / (2.0 * h);
                let want = -laguerre(n - 1, ord_up, x);
                let scale = want.abs().max(1.0);
                assert!(
                    (num - want).abs() / scale < 1e-6,
                    "n = {n}, alpha = {alpha}, x = {x}: {num} vs {want}"
                );
            }
        }
    }
}

#[test]
fn laguerre_value_at_zero_is_the_binomial() {
    // L_n^(a)(0) = Gamma(n + a + 1) / (Gamma(n + 1) Gamma(a + 1)).
    for &alpha in &[-0.5f64, 0.0, 1.0, 2.5] {
        let ord = LaguerreOrder::new(alpha).unwrap();
        for n in 0..=30usize {
            let nf = n as f64;
            let want = (log_gamma(nf + alpha + 1.0).unwrap()
                - log_gamma(nf + 1.0).unwrap()
                - log_gamma(alpha + 1.0).unwrap())
            .exp();
            rel_close(
                laguerre(n, ord, 0.0),
                want,
                1e-12,
                &format!("L_{n}^({alpha})(0)"),
            );
        }
    }
}

#[test]
fn laguerre_order_guards_its_domain() {
    assert!(LaguerreOrder::new(-0.999f64).is_ok());
    assert_eq!(LaguerreOrder::new(-1.0f64).unwrap_err().code(), "ORDER_TOO_SMALL");
    assert_eq!(LaguerreOrder::new(-1.5f64).unwrap_err().code(), "ORDER_TOO_SMALL");
    assert_eq!(LaguerreOrder::new(f64::NAN).unwrap_err().code(), "ORDER_TOO_SMALL");
    assert_eq!(
        LaguerreOrder::new(f64::INFINITY).unwrap_err().code(),
        "ORDER_TOO_SMALL"
    );
}

#[test]
fn whittaker_matches_reference_values() {
    rel_close(
        whittaker_m(0.25f64, 0.75, 2.0).unwrap(),
        2.2441132821777292,
        1e-12,
        "M_{0.25,0.75}(2.0)",
    );
    rel_close(
        whittaker_m(-1.5f64, 1.25, 0.8).unwrap(),
        0.9576304336835996,
        1e-12,
        "M_{-1.5,1.25}(0.8)",
    );
}

#[test]
fn whittaker_polynomial_case_reduces_to_laguerre() {
    // For kappa = n + mu + 1/2 the confluent series terminates and
    // M_{kappa,mu}(x) = e^(-x/2) x^(mu+1/2) n! / (1+2mu)_n * L_n^(2mu)(x).
    let (n, mu, x) = (2usize, 0.5f64, 1.3f64);
    let kappa = n as f64 + mu + 0.5;
    let got = whittaker_m(kappa, mu, x).unwrap();
    // (1+2mu)_n = (2)_2 = 6, n! = 2.
    let ord = LaguerreOrder::new(2.0 * mu).unwrap();
    let want = f64::exp(-x / 2.0) * x.powf(mu + 0.5) * 2.0 / 6.0 * laguerre(n, ord, x);
    rel_close(got, want, 1e-13, "polynomial Whittaker vs Laguerre");
    // And against the independently computed value.
    rel_close(got, -0.012442091012804233, 1e-12, "M_{3,0.5}(1.3)");
}

#[test]
fn whittaker_rejects_nonpositive_integer_denominators() {
    // 1 + 2 mu = 0 and = -1.
    assert_eq!(
        whittaker_m(1.0f64, -0.5, 1.0).unwrap_err().code(),
        "WHITTAKER_BAD_PARAMS"
    );
    assert_eq!(
        whittaker_m(1.0f64, -1.0, 1.0).unwrap_err().code(),
        "WHITTAKER_BAD_PARAMS"
    );
    // Near-half-integer mu just misses the pole and is fine.
    assert!(whittaker_m(1.0f64, -0.4, 1.0).is_ok());
}

#[test]
fn whittaker_reports_overflow_instead_of_saturating() {
    // Large argument with growing parameters overflows f64; the error says
    // so rather than returning infinity.
    let err = whittaker_m(-50.0f64, 1.0, 800.0).unwrap_err();
    assert_eq!(err.code(), "SERIES_OVERFLOW");
}

#[test]
fn whittaker_rejects_nonpositive_arguments() {
    assert_eq!(whittaker_m(0.25f64, 0.75, 0.0).unwrap_err().code(), "BAD_DOMAIN");
    assert_eq!(whittaker_m(0.25f64, 0.75, -2.0).unwrap_err().code(), "BAD_DOMAIN");
}
