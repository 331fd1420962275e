//! Model and payoff parameter sets, the monotone spot/coordinate maps, and
//! the eigenvalues of the pricing operator.

use crate::error::PricingError;
use crate::specfun::{log_gamma, LaguerreOrder};
use crate::{fp, Real};

/// Mode index into the eigenbasis; nonnegative by construction.
pub type EigenIndex = usize;

/// Risk-neutral dynamics dS = r S dt + sigma S^(k/2) dW with k > 2.
///
/// Invariants enforced at construction: r > 0, sigma > 0, k > 2, all finite.
/// The induced Laguerre order alpha = 1/(k-2) and coordinate scale
/// c = 2r/((k-2) sigma^2) are derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerVarianceModel<F> {
    r: F,
    sigma: F,
    k: F,
}

impl<F: Real> PowerVarianceModel<F> {
    pub fn new(r: F, sigma: F, k: F) -> Result<Self, PricingError> {
        if !(r > F::zero()) || !r.is_finite() {
            return Err(PricingError::NonpositiveRate {
                r: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(sigma > F::zero()) || !sigma.is_finite() {
            return Err(PricingError::NonpositiveSigma {
                sigma: sigma.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(k > fp(2.0)) || !k.is_finite() {
            return Err(PricingError::KOutOfRange {
                k: k.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { r, sigma, k })
    }

    /// Short rate r.
    pub fn rate(&self) -> F {
        self.r
    }

    /// Volatility sigma.
    pub fn sigma(&self) -> F {
        self.sigma
    }

    /// Variance exponent k.
    pub fn exponent(&self) -> F {
        self.k
    }

    /// Laguerre order alpha = 1/(k - 2) induced by the dynamics; always > 0.
    pub fn laguerre_alpha(&self) -> F {
        F::one() / (self.k - fp(2.0))
    }

    /// The induced order as a validated [`LaguerreOrder`].
    pub fn laguerre_order(&self) -> LaguerreOrder<F> {
        LaguerreOrder::new(self.laguerre_alpha()).expect("k > 2 implies alpha > 0")
    }

    /// Coordinate scale c = 2 r / ((k - 2) sigma^2).
    pub fn u_scale(&self) -> F {
        fp::<F>(2.0) * self.r / ((self.k - fp(2.0)) * self.sigma * self.sigma)
    }

    /// Coordinate map u(S) = c S^(2-k) for S > 0.
    ///
    /// Strictly decreasing, takes (0, inf) onto (0, inf): small spots map to
    /// the far Laguerre tail, large spots to the origin.
    pub fn u_of_s(&self, s: F) -> Result<F, PricingError> {
        if !(s > F::zero()) {
            return Err(PricingError::BadDomain {
                what: "spot",
                value: s.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.u_scale() * s.powf(fp::<F>(2.0) - self.k))
    }

    /// Inverse coordinate map S(u) = (c / u)^(1/(k-2)) for u > 0.
    pub fn s_of_u(&self, u: F) -> Result<F, PricingError> {
        if !(u > F::zero()) {
            return Err(PricingError::BadDomain {
                what: "laguerre coordinate",
                value: u.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok((self.u_scale() / u).powf(self.laguerre_alpha()))
    }

    /// Eigenvalue of the pricing operator on mode n:
    /// lambda_n = -r (n (k - 2) + 1). Strictly decreasing in n, and
    /// lambda_0 = -r, so every mode decays forward in time.
    pub fn eigenvalue(&self, n: EigenIndex) -> F {
        -(self.r * (fp::<F>(n as f64) * (self.k - fp(2.0)) + F::one()))
    }

    /// Per-mode discount factor e^(lambda_n tau) over a horizon tau >= 0.
    pub fn mode_discount(&self, n: EigenIndex, tau: F) -> F {
        (self.eigenvalue(n) * tau).exp()
    }
}

/// Terminal payoff g(S) = A (decay * S)^(p+1) e^(-decay * S) / (S * Gamma(p+1))
/// written in the equivalent direct form
/// g(S) = A * decay^(p+1) * S^(p+1) * e^(-decay * S) / Gamma(p+1).
///
/// Invariants: A > 0, decay > 0, p > -1. The payoff vanishes at S = 0,
/// peaks at S = (p+1)/decay, integrates to A (p+1) / decay over the spot
/// axis, and decays exponentially, so it has no far-field mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPayoff<F> {
    scale: F,
    decay: F,
    shape: F,
    // log Gamma(p + 1), precomputed once
    log_norm: F,
}

impl<F: Real> GammaPayoff<F> {
    pub fn new(scale: F, decay: F, shape: F) -> Result<Self, PricingError> {
        if !(scale > F::zero()) || !scale.is_finite() {
            return Err(PricingError::NonpositiveScale {
                scale: scale.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(decay > F::zero()) || !decay.is_finite() {
            return Err(PricingError::NonpositiveDecay {
                decay: decay.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(shape > fp(-1.0)) || !shape.is_finite() {
            return Err(PricingError::ShapeTooSmall {
                shape: shape.to_f64().unwrap_or(f64::NAN),
            });
        }
        let log_norm = log_gamma(shape + F::one()).expect("p > -1 implies p + 1 > 0");
        Ok(Self { scale, decay, shape, log_norm })
    }

    /// Overall scale A.
    pub fn scale(&self) -> F {
        self.scale
    }

    /// Exponential decay rate.
    pub fn decay_rate(&self) -> F {
        self.decay
    }

    /// Power-law shape p.
    pub fn shape(&self) -> F {
        self.shape
    }

    /// Spot at which the payoff is largest: S* = (p + 1) / decay.
    pub fn peak_spot(&self) -> F {
        (self.shape + F::one()) / self.decay
    }

    /// Payoff value; total. Defined as 0 for S <= 0 (continuous limit at the
    /// origin since p + 1 > 0). Computed in log space so that moderate
    /// parameters never overflow prematurely; only the outer scale A can push
    /// the result out of range, and callers that must reject non-finite
    /// values check for that themselves.
    pub fn value(&self, s: F) -> F {
        if !(s > F::zero()) {
            return F::zero();
        }
        let p1 = self.shape + F::one();
        let z = self.decay * s;
        self.scale * (p1 * z.ln() - z - self.log_norm).exp()
    }
}
