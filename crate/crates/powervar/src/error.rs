//! Error type shared by every fallible routine in the crate.
//!
//! Each variant carries a stable machine-readable code (see
//! [`PricingError::code`]) and is classified as either a rejected input or a
//! numerical failure (see [`PricingError::kind`]), which is what command-line
//! frontends map to process exit codes.

use thiserror::Error;

/// Broad failure classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller passed parameters outside a documented domain.
    InvalidParams,
    /// A numerical routine failed to produce a finite, converged result.
    Numerical,
}

/// Every failure the library can report.
///
/// Scalar context values are stored as `f64` regardless of the working
/// precision; they are diagnostics, not data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PricingError {
    /// The variance exponent must satisfy k > 2. At k = 2 the dynamics are
    /// lognormal and the coordinate change u = c S^(2-k) degenerates; below 2
    /// the spectral construction does not apply at all.
    #[error("variance exponent k must be finite and exceed 2, got {k}")]
    KOutOfRange { k: f64 },

    /// The short rate must be strictly positive: it sets the decay of every
    /// mode and the scale of the coordinate change.
    #[error("short rate r must be finite and positive, got {r}")]
    NonpositiveRate { r: f64 },

    /// Volatility must be strictly positive.
    #[error("volatility sigma must be finite and positive, got {sigma}")]
    NonpositiveSigma { sigma: f64 },

    /// The payoff scale A must be strictly positive.
    #[error("payoff scale must be finite and positive, got {scale}")]
    NonpositiveScale { scale: f64 },

    /// The payoff decay rate must be strictly positive, otherwise the payoff
    /// is not integrable against the spot axis.
    #[error("payoff decay rate must be finite and positive, got {decay}")]
    NonpositiveDecay { decay: f64 },

    /// The payoff shape must satisfy p > -1 so that S^(p+1) vanishes at zero.
    #[error("payoff shape p must be finite and exceed -1, got {shape}")]
    ShapeTooSmall { shape: f64 },

    /// Laguerre order parameters must satisfy alpha > -1 for the weight
    /// x^alpha e^(-x) to be integrable.
    #[error("Laguerre order alpha must be finite and exceed -1, got {alpha}")]
    OrderTooSmall { alpha: f64 },

    /// A scalar argument left its documented domain.
    #[error("{what} out of domain: got {value}")]
    BadDomain { what: &'static str, value: f64 },

    /// A grid or size argument is structurally unusable.
    #[error("invalid grid: {what}")]
    BadGrid { what: &'static str },

    /// The quadrature rule was built for a different Laguerre order than the
    /// model induces.
    #[error("rule order {rule_alpha} does not match the model order {expected}")]
    AlphaMismatch { rule_alpha: f64, expected: f64 },

    /// The quadrature rule has too few nodes for the requested projection.
    #[error("rule has {n_nodes} nodes but the projection needs at least {needed}")]
    RuleTooSmall { n_nodes: usize, needed: usize },

    /// Requested rule size outside the supported range.
    #[error("rule size {n} outside the supported range 1..={max}")]
    RuleSizeOutOfRange { n: usize, max: usize },

    /// Requested relative tolerance is below what the scheme can certify.
    #[error("relative tolerance {rel_tol} is tighter than the supported minimum {min}")]
    ToleranceTooTight { rel_tol: f64, min: f64 },

    /// Whittaker's M is undefined when 1 + 2 mu is a nonpositive integer.
    #[error("Whittaker parameter 1 + 2 mu = {two_mu_plus_one} is a nonpositive integer")]
    WhittakerBadParams { two_mu_plus_one: f64 },

    /// The tridiagonal eigensolver exceeded its iteration budget.
    #[error("eigensolver failed to converge for a rule of size {n} at eigenvalue {index}")]
    EigenNoConverge { n: usize, index: usize },

    /// A projection produced a non-finite coefficient.
    #[error("projection produced a non-finite coefficient for mode {mode}")]
    NonFiniteCoefficient { mode: usize },

    /// The integrand evaluated to a non-finite value at a live quadrature node.
    #[error("integrand not finite at node {node} (x = {x})")]
    NonFiniteIntegrand { node: usize, x: f64 },

    /// A numerical routine produced a non-finite intermediate value.
    #[error("non-finite value in {what}")]
    NonFiniteValue { what: &'static str },

    /// Adaptive quadrature ran out of refinement depth.
    #[error("adaptive quadrature reached maximum depth: achieved relative error {achieved_rel}, requested {requested_rel}")]
    AdaptiveNoConverge { achieved_rel: f64, requested_rel: f64 },

    /// A series evaluation did not meet its stopping rule within the term cap.
    #[error("{what} series did not converge within {terms} terms")]
    SeriesNoConverge { what: &'static str, terms: usize },

    /// A series evaluation overflowed the working precision.
    #[error("{what} overflowed the working precision")]
    SeriesOverflow { what: &'static str },

    /// A postcondition that only an implementation defect can violate failed.
    #[error("internal invariant violated: {what}")]
    Internal { what: &'static str },
}

impl PricingError {
    /// Stable machine-readable code for this failure.
    pub fn code(&self) -> &'static str {
        match self {
            PricingError::KOutOfRange { .. } => "K_OUT_OF_RANGE",
            PricingError::NonpositiveRate { .. } => "NONPOSITIVE_RATE",
            PricingError::NonpositiveSigma { .. } => "NONPOSITIVE_SIGMA",
            PricingError::NonpositiveScale { .. } => "NONPOSITIVE_SCALE",
            PricingError::NonpositiveDecay { .. } => "NONPOSITIVE_DECAY",
            PricingError::ShapeTooSmall { .. } => "SHAPE_TOO_SMALL",
            PricingError::OrderTooSmall { .. } => "ORDER_TOO_SMALL",
            PricingError::BadDomain { .. } => "BAD_DOMAIN",
            PricingError::BadGrid { .. } => "BAD_GRID",
            PricingError::AlphaMismatch { .. } => "ALPHA_MISMATCH",
            PricingError::RuleTooSmall { .. } => "RULE_TOO_SMALL",
            PricingError::RuleSizeOutOfRange { .. } => "RULE_SIZE_OUT_OF_RANGE",
            PricingError::ToleranceTooTight { .. } => "TOLERANCE_TOO_TIGHT",
            PricingError::WhittakerBadParams { .. } => "WHITTAKER_BAD_PARAMS",
            PricingError::EigenNoConverge { .. } => "EIGEN_NO_CONVERGE",
            PricingError::NonFiniteCoefficient { .. } => "NONFINITE_COEFFICIENT",
            PricingError::NonFiniteIntegrand { .. } => "NONFINITE_INTEGRAND",
            PricingError::NonFiniteValue { .. } => "NONFINITE_VALUE",
            PricingError::AdaptiveNoConverge { .. } => "ADAPTIVE_NO_CONVERGE",
            PricingError::SeriesNoConverge { .. } => "SERIES_NO_CONVERGE",
            PricingError::SeriesOverflow { .. } => "SERIES_OVERFLOW",
            PricingError::Internal { .. } => "INTERNAL",
        }
    }

    /// Whether this failure is a rejected input or a numerical breakdown.
    pub fn kind(&self) -> ErrorKind {
        match self {
            PricingError::KOutOfRange { .. }
            | PricingError::NonpositiveRate { .. }
            | PricingError::NonpositiveSigma { .. }
            | PricingError::NonpositiveScale { .. }
            | PricingError::NonpositiveDecay { .. }
            | PricingError::ShapeTooSmall { .. }
            | PricingError::OrderTooSmall { .. }
            | PricingError::BadDomain { .. }
            | PricingError::BadGrid { .. }
            | PricingError::AlphaMismatch { .. }
            | PricingError::RuleTooSmall { .. }
            | PricingError::RuleSizeOutOfRange { .. }
            | PricingError::ToleranceTooTight { .. }
            | PricingError::WhittakerBadParams { .. } => ErrorKind::InvalidParams,
            PricingError::EigenNoConverge { .. }
            | PricingError::NonFiniteCoefficient { .. }
            | PricingError::NonFiniteIntegrand { .. }
            | PricingError::NonFiniteValue { .. }
            | PricingError::AdaptiveNoConverge { .. }
            | PricingError::SeriesNoConverge { .. }
            | PricingError::SeriesOverflow { .. }
            | PricingError::Internal { .. } => ErrorKind::Numerical,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_distinct() {
        let samples = [
            PricingError::KOutOfRange { k: 2.0 },
            PricingError::NonpositiveRate { r: 0.0 },
            PricingError::NonpositiveSigma { sigma: 0.0 },
            PricingError::NonpositiveScale { scale: 0.0 },
            PricingError::NonpositiveDecay { decay: 0.0 },
            PricingError::ShapeTooSmall { shape: -1.0 },
            PricingError::OrderTooSmall { alpha: -1.0 },
            PricingError::BadDomain { what: "spot", value: -1.0 },
            PricingError::BadGrid { what: "empty" },
            PricingError::AlphaMismatch { rule_alpha: 0.5, expected: 1.0 },
            PricingError::RuleTooSmall { n_nodes: 4, needed: 8 },
            PricingError::RuleSizeOutOfRange { n: 0, max: 512 },
            PricingError::ToleranceTooTight { rel_tol: 0.0, min: 1e-12 },
            PricingError::WhittakerBadParams { two_mu_plus_one: 0.0 },
            PricingError::EigenNoConverge { n: 8, index: 3 },
            PricingError::NonFiniteCoefficient { mode: 0 },
            PricingError::NonFiniteIntegrand { node: 0, x: 1.0 },
            PricingError::NonFiniteValue { what: "state" },
            PricingError::AdaptiveNoConverge { achieved_rel: 1e-3, requested_rel: 1e-9 },
            PricingError::SeriesNoConverge { what: "kummer_m", terms: 10_000 },
            PricingError::SeriesOverflow { what: "kummer_m" },
            PricingError::Internal { what: "unreachable" },
        ];
        let mut codes: Vec<&str> = samples.iter().map(|e| e.code()).collect();
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), samples.len(), "duplicate error codes");
    }

    #[test]
    fn kinds_partition_input_vs_numerical() {
        assert_eq!(PricingError::KOutOfRange { k: 2.0 }.kind(), ErrorKind::InvalidParams);
        assert_eq!(
            PricingError::NonFiniteCoefficient { mode: 3 }.kind(),
            ErrorKind::Numerical
        );
    }
}
