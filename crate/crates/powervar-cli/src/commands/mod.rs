//! Subcommand implementations. Each resolves its configuration, computes,
//! renders one document, and writes it; failures map to process exit codes
//! in `main`.

mod coeffs;
mod converge;
mod price;
mod validate;

pub use coeffs::run as coeffs;
pub use converge::run as converge;
pub use price::run as price;
pub use validate::run as validate;

use powervar::{
    build_rule, crank_nicolson_solve, FdConfig, GammaPayoff, LaguerreOrder, PowerVarianceModel,
    PricingError, Rule64,
};

use crate::config::RunConfig;
use crate::CliError;

pub(crate) fn build_model(cfg: &RunConfig) -> Result<PowerVarianceModel<f64>, CliError> {
    Ok(PowerVarianceModel::new(cfg.r, cfg.sigma, cfg.k).map_err(CliError::Pricing)?)
}

pub(crate) fn build_payoff(cfg: &RunConfig) -> Result<GammaPayoff<f64>, CliError> {
    Ok(GammaPayoff::new(cfg.amplitude, cfg.decay, cfg.p).map_err(CliError::Pricing)?)
}

pub(crate) fn projection_rule(
    model: &PowerVarianceModel<f64>,
    n_nodes: usize,
) -> Result<Rule64, CliError> {
    let order = LaguerreOrder::new(model.laguerre_alpha()).map_err(CliError::Pricing)?;
    Ok(build_rule(order, n_nodes).map_err(CliError::Pricing)?)
}

/// Finite-difference prices at the requested spots for the given horizon,
/// linearly interpolated between grid nodes. Returns the values along with
/// the solver's domain diagnostics.
pub(crate) fn fd_prices_at(
    model: &PowerVarianceModel<f64>,
    payoff: &GammaPayoff<f64>,
    horizon: f64,
    fd: &FdConfig<f64>,
    spots: &[f64],
) -> Result<(Vec<f64>, bool, usize), PricingError> {
    let out = crank_nicolson_solve(model, payoff, horizon, fd)?;
    let row = &out.surface.values[0];
    let ds = fd.s_max / fd.n_space as f64;
    let mut values = Vec::with_capacity(spots.len());
    for &s in spots {
        if !(s > 0.0) || !s.is_finite() || s > fd.s_max {
            return Err(PricingError::BadDomain { what: "spot outside fd domain", value: s });
        }
        let pos = s / ds;
        let j = (pos.floor() as usize).min(fd.n_space - 1);
        let w = pos - j as f64;
        values.push((1.0 - w) * row[j] + w * row[j + 1]);
    }
    Ok((values, out.support_ok, out.non_dominant_rows))
}
