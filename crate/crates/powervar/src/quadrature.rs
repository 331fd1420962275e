//! Gauss-Laguerre quadrature via Golub-Welsch, plus adaptive Simpson
//! integration over spot space for rule-free cross-checks.

use crate::error::PricingError;
use crate::specfun::{log_gamma, LaguerreOrder};
use crate::{fp, Real};

/// Hard cap on rule sizes. Past this point the far nodes sit so deep in the
/// weight's tail that their f64 weights underflow to zero anyway.
pub const MAX_RULE_SIZE: usize = 512;

/// Minimum relative tolerance [`adaptive_integrate_s`] will accept.
pub const MIN_REL_TOL: f64 = 1e-12;

const QL_MAX_ITERS: usize = 50;
const ROOT_SEGMENTS: usize = 16;
const COARSE_PANELS: usize = 256;
const MAX_DEPTH: usize = 60;

/// A Gauss-Laguerre rule: nodes and weights such that
/// `sum_i w_i f(x_i) ~ integral_0^inf f(x) x^alpha e^(-x) dx`,
/// exact for polynomials of degree <= 2n - 1.
///
/// Invariants: nodes are strictly increasing and contained in
/// (0, 4n + 2 alpha + 4); weights are nonnegative and sum to Gamma(alpha+1).
/// Weights of far-tail nodes may underflow to exact zero in the working
/// precision; consumers skip those nodes before evaluating any integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerreRule<F> {
    alpha: F,
    nodes: Vec<F>,
    weights: Vec<F>,
}

impl<F: Real> GaussLaguerreRule<F> {
    /// Order parameter the rule was built for.
    pub fn alpha(&self) -> F {
        self.alpha
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in strictly increasing order.
    pub fn nodes(&self) -> &[F] {
        &self.nodes
    }

    /// Weights aligned with [`Self::nodes`].
    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    /// Approximates `integral_0^inf f(x) x^alpha e^(-x) dx`.
    ///
    /// Nodes whose weight underflowed to zero are skipped before `f` runs, so
    /// the integrand never has to be finite past the representable tail of
    /// the weight. A non-finite value at a live node is an error naming the
    /// node.
    pub fn integrate(&self, f: impl Fn(F) -> F) -> Result<F, PricingError> {
        let mut acc = F::zero();
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            if w == F::zero() {
                continue;
            }
            let fx = f(x);
            if !fx.is_finite() {
                return Err(PricingError::NonFiniteIntegrand {
                    node: i,
                    x: x.to_f64().unwrap_or(f64::NAN),
                });
            }
            acc = acc + w * fx;
        }
        Ok(acc)
    }
}

/// Builds an n-node Gauss-Laguerre rule for the given order.
///
/// Golub-Welsch: the nodes are the eigenvalues of the symmetrized Jacobi
/// matrix of the recurrence (diagonal 2i + alpha + 1, off-diagonal
/// sqrt(i (i + alpha))), and each weight is Gamma(alpha + 1) times the
/// squared first component of the corresponding unit eigenvector.
pub fn build_rule<F: Real>(
    order: LaguerreOrder<F>,
    n: usize,
) -> Result<GaussLaguerreRule<F>, PricingError> {
    if n == 0 || n > MAX_RULE_SIZE {
        return Err(PricingError::RuleSizeOutOfRange { n, max: MAX_RULE_SIZE });
    }
    let alpha = order.get();
    let one = F::one();
    let two = fp::<F>(2.0);

    let mut d: Vec<F> = (0..n)
        .map(|i| two * fp::<F>(i as f64) + alpha + one)
        .collect();
    // e[i] couples d[i] and d[i+1]; the last slot stays zero.
    let mut e: Vec<F> = (0..n)
        .map(|i| {
            if i + 1 < n {
                let ip1 = fp::<F>((i + 1) as f64);
                (ip1 * (ip1 + alpha)).sqrt()
            } else {
                F::zero()
            }
        })
        .collect();
    let mut z0 = vec![F::zero(); n];
    z0[0] = one;

    ql_first_row(&mut d, &mut e, &mut z0).map_err(|index| PricingError::EigenNoConverge { n, index })?;

    let mut idx: Vec<usize> = (0..n).collect();
    for &v in &d {
        if !v.is_finite() {
            return Err(PricingError::Internal { what: "eigensolver produced non-finite node" });
        }
    }
    idx.sort_unstable_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite nodes"));

    let mu0 = log_gamma(alpha + one)?.exp();
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &j in &idx {
        nodes.push(d[j]);
        weights.push(z0[j] * z0[j] * mu0);
    }

    // Containment band for Laguerre zeros; violation means a solver defect
    // (or an order so large the weights were never representable).
    let upper = fp::<F>(4.0 * n as f64) + two * alpha + fp(4.0);
    for (&x, &w) in nodes.iter().zip(&weights) {
        if !(x > F::zero()) || !(x < upper) {
            return Err(PricingError::Internal { what: "node outside containment band" });
        }
        if !w.is_finite() {
            return Err(PricingError::NonFiniteValue { what: "quadrature weights" });
        }
    }
    for i in 1..n {
        if !(nodes[i] > nodes[i - 1]) {
            return Err(PricingError::Internal { what: "nodes not strictly increasing" });
        }
    }

    Ok(GaussLaguerreRule { alpha, nodes, weights })
}

// Implicit-shift QL on a symmetric tridiagonal matrix, accumulating only the
// first row of the eigenvector matrix (all Golub-Welsch needs). d holds the
// diagonal, e[i] the coupling of rows i and i+1, z0 starts as e_0.
// On success d holds eigenvalues (unsorted) and z0 the first components of
// the corresponding unit eigenvectors. Err carries the index that failed to
// converge within the iteration budget.
fn ql_first_row<F: Real>(d: &mut [F], e: &mut [F], z0: &mut [F]) -> Result<(), usize> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let zero = F::zero();
    let one = F::one();
    let two = fp::<F>(2.0);
    let eps = F::epsilon();

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Look for a negligible off-diagonal element to split at.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITERS {
                return Err(l);
            }
            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(one);
            let sign_r = if g >= zero { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = one;
            let mut c = one;
            let mut p = zero;
            let mut underflow_restart = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == zero {
                    // Rotation underflowed; drop the shift and restart.
                    d[i + 1] = d[i + 1] - p;
                    e[m] = zero;
                    underflow_restart = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // Apply the same Givens rotation to the tracked first row.
                f = z0[i + 1];
                z0[i + 1] = s * z0[i] + c * f;
                z0[i] = c * z0[i] - s * f;
            }
            if underflow_restart {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(())
}

/// Adaptive Simpson quadrature of `f` over the spot interval
/// `[s_lo, s_hi]`, where `s_hi` may be infinite.
///
/// A half-infinite domain is compactified by `S = s_lo + v / (1 - v)` with
/// Jacobian `(1 - v)^-2`, and the transformed integrand is defined as 0 at
/// `v = 1`; integrands must therefore decay at large spot. Two passes: a
/// fixed composite sweep fixes the magnitude scale, then adaptive refinement
/// drives the absolute error below `rel_tol` times that scale. Exhausting
/// the refinement depth is an error carrying the achieved estimate.
pub fn adaptive_integrate_s<F: Real>(
    f: impl Fn(F) -> F,
    s_lo: F,
    s_hi: F,
    rel_tol: F,
) -> Result<F, PricingError> {
    if !(rel_tol >= fp(MIN_REL_TOL)) || !rel_tol.is_finite() {
        return Err(PricingError::ToleranceTooTight {
            rel_tol: rel_tol.to_f64().unwrap_or(f64::NAN),
            min: MIN_REL_TOL,
        });
    }
    if !(s_lo >= F::zero()) || !s_lo.is_finite() {
        return Err(PricingError::BadDomain {
            what: "lower spot limit",
            value: s_lo.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(s_hi > s_lo) {
        return Err(PricingError::BadDomain {
            what: "upper spot limit",
            value: s_hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let one = F::one();
    if s_hi.is_finite() {
        adaptive_core(&f, s_lo, s_hi, rel_tol)
    } else {
        let g = move |v: F| {
            if v >= one {
                return F::zero();
            }
            let om = one - v;
            f(s_lo + v / om) / (om * om)
        };
        adaptive_core(&g, F::zero(), one, rel_tol)
    }
}

fn eval_finite<F: Real>(g: &impl Fn(F) -> F, x: F) -> Result<F, PricingError> {
    let v = g(x);
    if !v.is_finite() {
        return Err(PricingError::NonFiniteValue { what: "adaptive integrand" });
    }
    Ok(v)
}

fn simpson<F: Real>(h: F, f0: F, fm: F, f1: F) -> F {
    h / fp::<F>(6.0) * (f0 + fp::<F>(4.0) * fm + f1)
}

fn adaptive_core<F: Real>(
    g: &impl Fn(F) -> F,
    a: F,
    b: F,
    rel_tol: F,
) -> Result<F, PricingError> {
    let two = fp::<F>(2.0);

    // Pass 1: composite Simpson for a magnitude estimate. The panel count is
    // fine enough that narrow features inside [a, b] register in the scale.
    let n = COARSE_PANELS;
    let h = (b - a) / fp(n as f64);
    let mut coarse = eval_finite(g, a)? + eval_finite(g, b)?;
    for i in 1..n {
        let x = a + h * fp(i as f64);
        let fx = eval_finite(g, x)?;
        let c = if i % 2 == 1 { fp::<F>(4.0) } else { two };
        coarse = coarse + c * fx;
    }
    coarse = coarse * h / fp(3.0);
    let scale = coarse.abs().max(fp(1e-300));

    // Pass 2: adaptive refinement against an absolute budget per segment.
    let seg_tol = rel_tol * scale / fp(ROOT_SEGMENTS as f64);
    let w = (b - a) / fp(ROOT_SEGMENTS as f64);
    let mut total = F::zero();
    for i in 0..ROOT_SEGMENTS {
        let lo = a + w * fp(i as f64);
        let hi = if i + 1 == ROOT_SEGMENTS { b } else { a + w * fp((i + 1) as f64) };
        let mid = (lo + hi) / two;
        let flo = eval_finite(g, lo)?;
        let fmid = eval_finite(g, mid)?;
        let fhi = eval_finite(g, hi)?;
        let whole = simpson(hi - lo, flo, fmid, fhi);
        total = total
            + adapt_step(
                g, lo, mid, hi, flo, fmid, fhi, whole, seg_tol, MAX_DEPTH, rel_tol, scale,
            )?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn adapt_step<F: Real>(
    g: &impl Fn(F) -> F,
    lo: F,
    mid: F,
    hi: F,
    flo: F,
    fmid: F,
    fhi: F,
    whole: F,
    tol: F,
    depth: usize,
    rel_tol: F,
    scale: F,
) -> Result<F, PricingError> {
    let two = fp::<F>(2.0);
    let fifteen = fp::<F>(15.0);
    let lm = (lo + mid) / two;
    let rm = (mid + hi) / two;
    // No representable interior point left: accept what we have.
    if lm <= lo || rm <= mid || lm >= mid || rm >= hi {
        return Ok(whole);
    }
    let flm = eval_finite(g, lm)?;
    let frm = eval_finite(g, rm)?;
    let left = simpson(mid - lo, flo, flm, fmid);
    let right = simpson(hi - mid, fmid, frm, fhi);
    let refined = left + right;
    let err = refined - whole;
    if err.abs() <= fifteen * tol {
        // Richardson extrapolation: one order beyond plain Simpson.
        return Ok(refined + err / fifteen);
    }
    if depth == 0 {
        return Err(PricingError::AdaptiveNoConverge {
            achieved_rel: (err / fifteen / scale).abs().to_f64().unwrap_or(f64::NAN),
            requested_rel: rel_tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half_tol = tol / two;
    let l = adapt_step(g, lo, lm, mid, flo, flm, fmid, left, half_tol, depth - 1, rel_tol, scale)?;
    let r = adapt_step(g, mid, rm, hi, fmid, frm, fhi, right, half_tol, depth - 1, rel_tol, scale)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_rule_is_exact_for_degree_one() {
        // n = 1: node alpha + 1, weight Gamma(alpha + 1).
        let ord = LaguerreOrder::new(1.5f64).unwrap();
        let rule = build_rule(ord, 1).unwrap();
        assert!((rule.nodes()[0] - 2.5).abs() < 1e-14);
        let gamma_2_5 = 1.329_340_388_179_137_2;
        assert!((rule.weights()[0] - gamma_2_5).abs() < 1e-13 * gamma_2_5);
    }

    #[test]
    fn two_node_rule_matches_closed_form() {
        let ord = LaguerreOrder::new(0.0f64).unwrap();
        let rule = build_rule(ord, 2).unwrap();
        let s2 = f64::sqrt(2.0);
        let want_nodes = [2.0 - s2, 2.0 + s2];
        let want_weights = [(2.0 + s2) / 4.0, (2.0 - s2) / 4.0];
        for i in 0..2 {
            assert!((rule.nodes()[i] - want_nodes[i]).abs() < 1e-13, "node {i}");
            assert!((rule.weights()[i] - want_weights[i]).abs() < 1e-13, "weight {i}");
        }
    }

    #[test]
    fn rule_size_bounds_are_enforced() {
        let ord = LaguerreOrder::new(1.0f64).unwrap();
        assert!(matches!(
            build_rule(ord, 0),
            Err(PricingError::RuleSizeOutOfRange { .. })
        ));
        assert!(matches!(
            build_rule(ord, MAX_RULE_SIZE + 1),
            Err(PricingError::RuleSizeOutOfRange { .. })
        ));
    }
}
