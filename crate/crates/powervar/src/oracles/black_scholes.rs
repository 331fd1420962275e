//! Black-Scholes closed forms. The pricer under test never uses these
//! formulas; they exist as an exactly-known benchmark for the shared
//! numerical kernels (erf, discounting) and for put-call parity checks.

use crate::error::PricingError;
use crate::specfun::erf;
use crate::{fp, Real};

/// Standard normal CDF.
fn norm_cdf<F: Real>(x: F) -> F {
    fp::<F>(0.5) * (F::one() + erf(x / F::SQRT_2()))
}

fn validate_bs_inputs<F: Real>(s: F, strike: F, r: F, sigma: F, tau: F) -> Result<(), PricingError> {
    if !(s > F::zero()) || !s.is_finite() {
        return Err(PricingError::BadDomain {
            what: "spot",
            value: s.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(strike > F::zero()) || !strike.is_finite() {
        return Err(PricingError::BadDomain {
            what: "strike",
            value: strike.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !r.is_finite() {
        return Err(PricingError::BadDomain {
            what: "rate",
            value: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(sigma > F::zero()) || !sigma.is_finite() {
        return Err(PricingError::NonpositiveSigma {
            sigma: sigma.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(tau >= F::zero()) || !tau.is_finite() {
        return Err(PricingError::BadDomain {
            what: "time to expiry",
            value: tau.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn d1_d2<F: Real>(s: F, strike: F, r: F, sigma: F, tau: F) -> (F, F) {
    let half = fp::<F>(0.5);
    let vol = sigma * tau.sqrt();
    let d1 = ((s / strike).ln() + (r + half * sigma * sigma) * tau) / vol;
    (d1, d1 - vol)
}

/// European call under lognormal dynamics. At tau = 0 this returns the
/// intrinsic value exactly (no formula evaluation at the singular point).
pub fn bs_call<F: Real>(s: F, strike: F, r: F, sigma: F, tau: F) -> Result<F, PricingError> {
    validate_bs_inputs(s, strike, r, sigma, tau)?;
    if tau == F::zero() {
        return Ok((s - strike).max(F::zero()));
    }
    let (d1, d2) = d1_d2(s, strike, r, sigma, tau);
    let v = s * norm_cdf(d1) - strike * (-r * tau).exp() * norm_cdf(d2);
    if !v.is_finite() {
        return Err(PricingError::NonFiniteValue { what: "black_scholes call" });
    }
    Ok(v)
}

/// European put, evaluated from its own formula rather than via parity so
/// that parity remains a meaningful cross-check.
pub fn bs_put<F: Real>(s: F, strike: F, r: F, sigma: F, tau: F) -> Result<F, PricingError> {
    validate_bs_inputs(s, strike, r, sigma, tau)?;
    if tau == F::zero() {
        return Ok((strike - s).max(F::zero()));
    }
    let (d1, d2) = d1_d2(s, strike, r, sigma, tau);
    let v = strike * (-r * tau).exp() * norm_cdf(-d2) - s * norm_cdf(-d1);
    if !v.is_finite() {
        return Err(PricingError::NonFiniteValue { what: "black_scholes put" });
    }
    Ok(v)
}

/// Call or put.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    Call,
    Put,
}

/// A vanilla European contract: strike, maturity, and direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanillaContract<F> {
    strike: F,
    maturity: F,
    kind: OptionKind,
}

impl<F: Real> VanillaContract<F> {
    /// Requires strike > 0 and maturity >= 0, both finite.
    pub fn new(strike: F, maturity: F, kind: OptionKind) -> Result<Self, PricingError> {
        if !(strike > F::zero()) || !strike.is_finite() {
            return Err(PricingError::BadDomain {
                what: "strike",
                value: strike.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(maturity >= F::zero()) || !maturity.is_finite() {
            return Err(PricingError::BadDomain {
                what: "maturity",
                value: maturity.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { strike, maturity, kind })
    }

    pub fn strike(&self) -> F {
        self.strike
    }

    pub fn maturity(&self) -> F {
        self.maturity
    }

    pub fn kind(&self) -> OptionKind {
        self.kind
    }

    /// Lognormal price of the contract seen from time t <= maturity.
    pub fn price(&self, s: F, r: F, sigma: F, t: F) -> Result<F, PricingError> {
        if !(t <= self.maturity) || !t.is_finite() {
            return Err(PricingError::BadDomain {
                what: "valuation time",
                value: t.to_f64().unwrap_or(f64::NAN),
            });
        }
        let tau = self.maturity - t;
        match self.kind {
            OptionKind::Call => bs_call(s, self.strike, r, sigma, tau),
            OptionKind::Put => bs_put(s, self.strike, r, sigma, tau),
        }
    }
}
