//! Spectral pricer for diffusions whose variance grows superlinearly in the spot.
//!
//! The risk-neutral dynamics are
//!
//! ```text
//! dS = r S dt + sigma S^(k/2) dW,        k > 2,
//! ```
//!
//! so the local variance is `sigma^2 S^k` rather than the lognormal `sigma^2 S^2`.
//! Under the monotone change of variable `u = c S^(2-k)` with
//! `c = 2 r / ((k - 2) sigma^2)`, the pricing operator becomes the generalized
//! Laguerre operator of order `alpha = 1 / (k - 2)`. Discounted prices therefore
//! expand in Laguerre polynomials,
//!
//! ```text
//! V(t, S) = sum_n  c_n  L_n^(alpha)(u(S))  exp(lambda_n (T - t)),
//! lambda_n = -r (n (k - 2) + 1),
//! ```
//!
//! with time entering only through the scalar per-mode decay factors. The
//! stored coefficients `c_n` are time-free projections of the terminal payoff
//! onto the basis, computed by Gauss-Laguerre quadrature (or by adaptive
//! quadrature in spot space as an independent route).
//!
//! Module map:
//! - [`model`]: validated model and payoff parameter sets, the spot/coordinate
//!   maps, and the operator eigenvalues.
//! - [`specfun`]: Laguerre polynomials, log-gamma, erf, and Whittaker's M.
//! - [`quadrature`]: Gauss-Laguerre rule construction (Golub-Welsch) and
//!   adaptive Simpson integration over spot space.
//! - [`spectral`]: payoff projection, expansion evaluation, price surfaces,
//!   and truncation diagnostics.
//! - [`oracles`]: independent pricing routes (Black-Scholes closed forms,
//!   Crank-Nicolson finite differences, full-truncation Euler Monte Carlo)
//!   used to cross-check the spectral method.
//!
//! All numerics are generic over the scalar type through the [`Real`] trait;
//! `f64` is the intended production type and the `*64` aliases at the crate
//! root pin it.

use std::fmt::Debug;

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

pub mod error;
pub mod model;
pub mod oracles;
pub mod quadrature;
pub mod specfun;
pub mod spectral;

pub use error::{ErrorKind, PricingError};
pub use model::{EigenIndex, GammaPayoff, PowerVarianceModel};
pub use oracles::{
    bs_call, bs_put, crank_nicolson_solve, monte_carlo_price, CnOutput, FdConfig, McConfig,
    McOutput, OptionKind, VanillaContract,
};
pub use quadrature::{adaptive_integrate_s, build_rule, GaussLaguerreRule, MAX_RULE_SIZE};
pub use specfun::{erf, laguerre, log_gamma, whittaker_m, LaguerreOrder};
pub use spectral::{
    project_coefficients, project_coefficients_adaptive, MethodTag, PriceSurface,
    SpectralSolution, TailReport,
};

/// Scalar type for every numerical routine in this crate.
///
/// Implemented by `f32` and `f64`. Accuracy statements in the documentation
/// (and the frozen constants in the test suite) assume `f64`; `f32` runs the
/// same algorithms at its own precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static
{
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

/// Converts a compile-time `f64` constant into the working scalar type.
#[inline]
pub(crate) fn fp<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("f64 constant must convert into the scalar type")
}

/// Model over `f64`.
pub type Model64 = model::PowerVarianceModel<f64>;
/// Payoff over `f64`.
pub type Payoff64 = model::GammaPayoff<f64>;
/// Quadrature rule over `f64`.
pub type Rule64 = quadrature::GaussLaguerreRule<f64>;
/// Spectral solution over `f64`.
pub type Solution64 = spectral::SpectralSolution<f64>;
/// Price surface over `f64`.
pub type Surface64 = spectral::PriceSurface<f64>;
