//! Projection of the terminal payoff onto the Laguerre eigenbasis, expansion
//! evaluation, price surfaces, and truncation diagnostics.

use rayon::prelude::*;

use crate::error::PricingError;
use crate::model::{GammaPayoff, PowerVarianceModel};
use crate::quadrature::{adaptive_integrate_s, GaussLaguerreRule};
use crate::specfun::{laguerre, log_gamma};
use crate::{fp, Real};

/// Which pricing route produced a surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Spectral,
    CrankNicolson,
    MonteCarlo,
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MethodTag::Spectral => "spectral",
            MethodTag::CrankNicolson => "crank_nicolson",
            MethodTag::MonteCarlo => "monte_carlo",
        };
        f.write_str(s)
    }
}

/// Prices on a rectangular (time x spot) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSurface<F> {
    pub t_grid: Vec<F>,
    pub s_grid: Vec<F>,
    /// `values[i][j]` is the price at `(t_grid[i], s_grid[j])`.
    pub values: Vec<Vec<F>>,
    pub method: MethodTag,
}

/// Truncation diagnostics for a spectral solution.
#[derive(Debug, Clone, PartialEq)]
pub struct TailReport<F> {
    /// `mode_weights[n] = |c_n| sqrt(Gamma(n + alpha + 1) / n!)`: the norm
    /// contribution of mode n in the weighted L2 space.
    pub mode_weights: Vec<F>,
    /// `tail_ratios[j] = max_{n >= j} mode_weights[n] / max_n mode_weights[n]`;
    /// nonincreasing in j by construction, `tail_ratios[0] = 1`.
    pub tail_ratios: Vec<F>,
    /// Smallest truncation N' with `tail_ratios[N'] < TAIL_RATIO_TARGET`,
    /// i.e. every discarded mode is negligible at that cut. `None` when no
    /// admissible cut exists within the computed modes.
    pub suggested_n_terms: Option<usize>,
}

/// Threshold under which a tail is considered negligible.
pub const TAIL_RATIO_TARGET: f64 = 1e-6;

/// A payoff expanded in the Laguerre eigenbasis of a model.
///
/// Stores the time-free projection coefficients `c_n`; time enters evaluation
/// only through the per-mode decay factors `exp(lambda_n (T - t))`, so one
/// projection prices every `(t, S)` with `t <= T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution<F> {
    model: PowerVarianceModel<F>,
    payoff: GammaPayoff<F>,
    maturity: F,
    coeffs: Vec<F>,
    tail_ratio: F,
    support_warning: bool,
}

/// Projects the payoff onto the first `n_terms` basis modes with a
/// Gauss-Laguerre rule:
///
/// ```text
/// c_m = (m! / Gamma(m + alpha + 1)) * sum_i w_i g(S(x_i)) L_m^(alpha)(x_i).
/// ```
///
/// Preconditions: the rule's order equals the model's induced order, and the
/// rule has at least `2 n_terms` nodes so the highest products
/// `g L_{n_terms-1}` are still integrated with headroom. Zero-weight tail
/// nodes are skipped before the payoff or the recurrence run, which keeps the
/// dead tail from polluting the sums with overflow times zero.
pub fn project_coefficients<F: Real>(
    model: &PowerVarianceModel<F>,
    payoff: &GammaPayoff<F>,
    maturity: F,
    n_terms: usize,
    rule: &GaussLaguerreRule<F>,
) -> Result<SpectralSolution<F>, PricingError> {
    validate_projection_inputs(maturity, n_terms)?;
    let alpha = model.laguerre_alpha();
    let rel_gap = (rule.alpha() - alpha).abs() / alpha.max(F::one());
    if rel_gap > fp(1e-12) {
        return Err(PricingError::AlphaMismatch {
            rule_alpha: rule.alpha().to_f64().unwrap_or(f64::NAN),
            expected: alpha.to_f64().unwrap_or(f64::NAN),
        });
    }
    if rule.len() < 2 * n_terms {
        return Err(PricingError::RuleTooSmall {
            n_nodes: rule.len(),
            needed: 2 * n_terms,
        });
    }

    let one = F::one();
    let two = fp::<F>(2.0);
    let mut raw = vec![F::zero(); n_terms];
    for (i, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        if w == F::zero() {
            continue;
        }
        let s = model.s_of_u(x)?;
        let g = payoff.value(s);
        if !g.is_finite() {
            return Err(PricingError::NonFiniteIntegrand {
                node: i,
                x: x.to_f64().unwrap_or(f64::NAN),
            });
        }
        let wg = w * g;
        // Accumulate against all modes in one upward recurrence pass.
        let mut prev = one;
        raw[0] = raw[0] + wg;
        if n_terms > 1 {
            let mut cur = one + alpha - x;
            raw[1] = raw[1] + wg * cur;
            for m in 1..n_terms - 1 {
                let mf = fp::<F>(m as f64);
                let next = ((two * mf + one + alpha - x) * cur - (mf + alpha) * prev) / (mf + one);
                prev = cur;
                cur = next;
                raw[m + 1] = raw[m + 1] + wg * cur;
            }
        }
    }

    let mut coeffs = Vec::with_capacity(n_terms);
    for (m, &num) in raw.iter().enumerate() {
        let mf = fp::<F>(m as f64);
        // 1 / h_m as exp of a log-gamma difference; overflow-free for any m.
        let inv_norm = (log_gamma(mf + one)? - log_gamma(mf + alpha + one)?).exp();
        let c = num * inv_norm;
        if !c.is_finite() {
            return Err(PricingError::NonFiniteCoefficient { mode: m });
        }
        coeffs.push(c);
    }

    // Payoff peak landing outside the node range means the rule never sees
    // the bulk of the payoff; prices would be quietly wrong.
    let u_peak = model.u_of_s(payoff.peak_spot())?;
    let support_warning =
        u_peak < rule.nodes()[0] || u_peak > rule.nodes()[rule.len() - 1];

    Ok(SpectralSolution::assemble(
        *model,
        *payoff,
        maturity,
        coeffs,
        support_warning,
    ))
}

/// Projects the payoff by adaptive quadrature in spot space, with no fixed
/// node set:
///
/// ```text
/// c_m = (m!/Gamma(m+alpha+1)) * (1/K) *
///       integral_0^inf g(S) L_m^(alpha)(u(S)) u(S)^(k/(k-2)) e^(-u(S)) dS,
/// K = c^alpha / (k - 2),
/// ```
///
/// which is the weighted inner product transported to the spot axis. Slower
/// than the rule route but independent of it; the two must agree for payoffs
/// the rule resolves, and the acceptance suite pins that agreement.
pub fn project_coefficients_adaptive<F: Real>(
    model: &PowerVarianceModel<F>,
    payoff: &GammaPayoff<F>,
    maturity: F,
    n_terms: usize,
    rel_tol: F,
) -> Result<SpectralSolution<F>, PricingError> {
    validate_projection_inputs(maturity, n_terms)?;
    let alpha = model.laguerre_alpha();
    let order = model.laguerre_order();
    let k = model.exponent();
    let two = fp::<F>(2.0);
    let u_scale = model.u_scale();
    let u_pow = k / (k - two);
    // Beyond this coordinate the weight e^(-u) underflows the working
    // precision; the polynomial factors cannot compensate, so the integrand
    // is defined as exactly zero there.
    let u_cut = -F::min_positive_value().ln();
    let inv_k_factor = (k - two) / u_scale.powf(alpha);

    let mut coeffs = Vec::with_capacity(n_terms);
    for m in 0..n_terms {
        let integrand = |s: F| {
            if !(s > F::zero()) {
                return F::zero();
            }
            let u = u_scale * s.powf(two - k);
            if u > u_cut {
                return F::zero();
            }
            payoff.value(s) * laguerre(m, order, u) * u.powf(u_pow) * (-u).exp()
        };
        let integral = adaptive_integrate_s(integrand, F::zero(), F::infinity(), rel_tol)?;
        let mf = fp::<F>(m as f64);
        let inv_norm = (log_gamma(mf + F::one())? - log_gamma(mf + alpha + F::one())?).exp();
        let c = integral * inv_k_factor * inv_norm;
        if !c.is_finite() {
            return Err(PricingError::NonFiniteCoefficient { mode: m });
        }
        coeffs.push(c);
    }

    Ok(SpectralSolution::assemble(
        *model,
        *payoff,
        maturity,
        coeffs,
        false,
    ))
}

fn validate_projection_inputs<F: Real>(
    maturity: F,
    n_terms: usize,
) -> Result<(), PricingError> {
    if !(maturity >= F::zero()) || !maturity.is_finite() {
        return Err(PricingError::BadDomain {
            what: "maturity",
            value: maturity.to_f64().unwrap_or(f64::NAN),
        });
    }
    if n_terms == 0 {
        return Err(PricingError::BadGrid { what: "n_terms must be at least 1" });
    }
    Ok(())
}

impl<F: Real> SpectralSolution<F> {
    fn assemble(
        model: PowerVarianceModel<F>,
        payoff: GammaPayoff<F>,
        maturity: F,
        coeffs: Vec<F>,
        support_warning: bool,
    ) -> Self {
        let max_abs = coeffs
            .iter()
            .fold(F::zero(), |acc, &c| acc.max(c.abs()));
        let tail_ratio = if max_abs > F::zero() {
            coeffs.last().map(|c| c.abs() / max_abs).unwrap_or(F::zero())
        } else {
            F::zero()
        };
        Self { model, payoff, maturity, coeffs, tail_ratio, support_warning }
    }

    pub fn model(&self) -> &PowerVarianceModel<F> {
        &self.model
    }

    pub fn payoff(&self) -> &GammaPayoff<F> {
        &self.payoff
    }

    pub fn maturity(&self) -> F {
        self.maturity
    }

    /// Number of retained modes.
    pub fn n_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Time-free projection coefficients.
    pub fn coefficients(&self) -> &[F] {
        &self.coeffs
    }

    /// `|c_{N-1}| / max_n |c_n|`: how much the last retained mode still
    /// carries. Near 1 means the truncation is nowhere near resolving the
    /// payoff.
    pub fn tail_ratio(&self) -> F {
        self.tail_ratio
    }

    /// True when the payoff peak fell outside the projection rule's node
    /// range, so the coefficients are untrustworthy.
    pub fn support_warning(&self) -> bool {
        self.support_warning
    }

    /// Price at `(t, S)`:
    /// `V(t, S) = sum_n c_n L_n^(alpha)(u(S)) exp(lambda_n (T - t))`.
    pub fn evaluate(&self, t: F, s: F) -> Result<F, PricingError> {
        self.evaluate_truncated(self.coeffs.len(), t, s)
    }

    /// Same expansion cut to the first `n_used` modes. Prefixes nest because
    /// the projection is orthogonal, so this reuses the stored coefficients.
    pub fn evaluate_truncated(&self, n_used: usize, t: F, s: F) -> Result<F, PricingError> {
        if n_used > self.coeffs.len() {
            return Err(PricingError::BadGrid { what: "n_used exceeds stored modes" });
        }
        let (u, tau) = self.eval_point(t, s)?;
        let alpha = self.model.laguerre_alpha();
        let one = F::one();
        let two = fp::<F>(2.0);
        let mut acc = F::zero();
        let mut prev = one;
        if n_used > 0 {
            acc = acc + self.coeffs[0] * self.model.mode_discount(0, tau);
        }
        if n_used > 1 {
            let mut cur = one + alpha - u;
            acc = acc + self.coeffs[1] * cur * self.model.mode_discount(1, tau);
            for m in 1..n_used - 1 {
                let mf = fp::<F>(m as f64);
                let next = ((two * mf + one + alpha - u) * cur - (mf + alpha) * prev) / (mf + one);
                prev = cur;
                cur = next;
                acc = acc + self.coeffs[m + 1] * cur * self.model.mode_discount(m + 1, tau);
            }
        }
        if !acc.is_finite() {
            return Err(PricingError::NonFiniteValue { what: "spectral evaluation" });
        }
        Ok(acc)
    }

    /// Contribution of a single mode,
    /// `V_n(t, S) = c_n L_n^(alpha)(u(S)) exp(lambda_n (T - t))`.
    /// Satisfies `V_n(t, S) = exp(lambda_n (T - t)) V_n(T, S)` exactly, which
    /// is the per-mode discounting identity the tests pin.
    pub fn evaluate_single_mode(&self, mode: usize, t: F, s: F) -> Result<F, PricingError> {
        if mode >= self.coeffs.len() {
            return Err(PricingError::BadGrid { what: "mode index exceeds stored modes" });
        }
        let (u, tau) = self.eval_point(t, s)?;
        let l = laguerre(mode, self.model.laguerre_order(), u);
        Ok(self.coeffs[mode] * l * self.model.mode_discount(mode, tau))
    }

    fn eval_point(&self, t: F, s: F) -> Result<(F, F), PricingError> {
        if !(t <= self.maturity) || !t.is_finite() {
            return Err(PricingError::BadDomain {
                what: "valuation time",
                value: t.to_f64().unwrap_or(f64::NAN),
            });
        }
        let u = self.model.u_of_s(s)?;
        Ok((u, self.maturity - t))
    }

    /// Evaluates the expansion on a rectangular grid. Rows are independent
    /// and evaluated in parallel; the result does not depend on scheduling.
    pub fn price_surface(&self, t_grid: &[F], s_grid: &[F]) -> Result<PriceSurface<F>, PricingError> {
        if t_grid.is_empty() || s_grid.is_empty() {
            return Err(PricingError::BadGrid { what: "empty price grid" });
        }
        let values: Result<Vec<Vec<F>>, PricingError> = t_grid
            .par_iter()
            .map(|&t| s_grid.iter().map(|&s| self.evaluate(t, s)).collect())
            .collect();
        Ok(PriceSurface {
            t_grid: t_grid.to_vec(),
            s_grid: s_grid.to_vec(),
            values: values?,
            method: MethodTag::Spectral,
        })
    }

    /// Norm-weighted truncation diagnostics; see [`TailReport`].
    pub fn tail_report(&self) -> TailReport<F> {
        let alpha = self.model.laguerre_alpha();
        let one = F::one();
        let half = fp::<F>(0.5);
        let n = self.coeffs.len();
        let mut mode_weights = Vec::with_capacity(n);
        for (m, &c) in self.coeffs.iter().enumerate() {
            let mf = fp::<F>(m as f64);
            let lg = log_gamma(mf + alpha + one).expect("alpha > -1")
                - log_gamma(mf + one).expect("positive argument");
            mode_weights.push(c.abs() * (half * lg).exp());
        }
        // Running max from the right makes the ratios monotone by
        // construction rather than by accident.
        let mut suffix_max = vec![F::zero(); n];
        let mut running = F::zero();
        for j in (0..n).rev() {
            running = running.max(mode_weights[j]);
            suffix_max[j] = running;
        }
        let global = suffix_max.first().copied().unwrap_or(F::zero());
        let tail_ratios: Vec<F> = suffix_max
            .iter()
            .map(|&m| if global > F::zero() { m / global } else { F::zero() })
            .collect();
        let target = fp::<F>(TAIL_RATIO_TARGET);
        let suggested_n_terms = (1..n).find(|&j| tail_ratios[j] < target);
        TailReport { mode_weights, tail_ratios, suggested_n_terms }
    }

    /// Discrete weighted relative L2 distance between the payoff and its
    /// truncated expansion at maturity, measured on the rule's own nodes:
    ///
    /// ```text
    /// err(N')^2 = sum_i w_i (g(S(x_i)) - sum_{m<N'} c_m L_m(x_i))^2
    ///           / sum_i w_i g(S(x_i))^2.
    /// ```
    pub fn reconstruction_error(
        &self,
        n_used: usize,
        rule: &GaussLaguerreRule<F>,
    ) -> Result<F, PricingError> {
        if n_used > self.coeffs.len() {
            return Err(PricingError::BadGrid { what: "n_used exceeds stored modes" });
        }
        let alpha = self.model.laguerre_alpha();
        let rel_gap = (rule.alpha() - alpha).abs() / alpha.max(F::one());
        if rel_gap > fp(1e-12) {
            return Err(PricingError::AlphaMismatch {
                rule_alpha: rule.alpha().to_f64().unwrap_or(f64::NAN),
                expected: alpha.to_f64().unwrap_or(f64::NAN),
            });
        }
        let order = self.model.laguerre_order();
        let mut num = F::zero();
        let mut den = F::zero();
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            if w == F::zero() {
                continue;
            }
            let s = self.model.s_of_u(x)?;
            let g = self.payoff.value(s);
            let mut recon = F::zero();
            // n_used is small in practice; the direct recurrence per node is fine.
            for (m, &c) in self.coeffs.iter().take(n_used).enumerate() {
                recon = recon + c * laguerre(m, order, x);
            }
            let diff = g - recon;
            num = num + w * diff * diff;
            den = den + w * g * g;
        }
        if den == F::zero() {
            return Ok(F::zero());
        }
        let e = (num / den).sqrt();
        if !e.is_finite() {
            return Err(PricingError::NonFiniteValue { what: "reconstruction error" });
        }
        Ok(e)
    }
}
