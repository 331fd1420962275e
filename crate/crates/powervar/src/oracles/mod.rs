//! Independent pricing routes used to cross-check the spectral method:
//! Black-Scholes closed forms (the k = 2 lognormal benchmark), a
//! Crank-Nicolson finite-difference solver for the full pricing PDE, and a
//! full-truncation Euler Monte Carlo engine with a counter-based,
//! scheduling-independent random stream.

mod black_scholes;
mod crank_nicolson;
mod monte_carlo;

pub use black_scholes::{bs_call, bs_put, OptionKind, VanillaContract};
pub use crank_nicolson::{crank_nicolson_solve, CnOutput, FdConfig};
pub use monte_carlo::{monte_carlo_price, McConfig, McOutput};
