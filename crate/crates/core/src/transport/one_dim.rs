//! `W_p` on the real line through quantile functions:
//! `W_p(μ,ν)^p = ∫_0^1 |F_μ^{-1}(t) - F_ν^{-1}(t)|^p dt`.
//!
//! Both quantile functions are step functions, constant between the
//! cumulative-weight breakpoints of either measure, so the integral is a
//! finite sum over the common refinement of those breakpoints.

use crate::error::Result;
use crate::measure::Measure;
use crate::metric::RealLine;
use crate::scalar::{Order, Scalar};

/// Exact `W_p^p` (rational in exact mode for integer `p`).
pub fn cost_1d<S: Scalar>(mu: &Measure<S, RealLine>, nu: &Measure<S, RealLine>, p: Order) -> Result<S> {
    // atoms are already sorted ascending
    let cum = |m: &Measure<S, RealLine>| -> Vec<S> {
        let mut acc = S::zero();
        m.weights()
            .iter()
            .map(|w| {
                acc = acc.clone() + w.clone();
                acc.clone()
            })
            .collect()
    };
    let fa = cum(mu);
    let fb = cum(nu);
    let (xa, xb) = (mu.atoms(), nu.atoms());

    let mut total = S::zero();
    let mut prev = S::zero();
    let (mut i, mut j) = (0, 0);
    while i < fa.len() && j < fb.len() {
        // next breakpoint of the common refinement
        let t = S::min_of(fa[i].clone(), fb[j].clone());
        let width = t.clone() - prev.clone();
        if width > S::zero() {
            let gap = (xa[i].clone() - xb[j].clone()).abs();
            total = total + width * gap.pow(p)?;
        }
        prev = t.clone();
        if fa[i] <= t {
            i += 1;
        }
        if fb[j] <= t {
            j += 1;
        }
    }
    Ok(total)
}

/// `W_p(μ, ν)` for measures on the line.
pub fn wasserstein_1d<S: Scalar>(mu: &Measure<S, RealLine>, nu: &Measure<S, RealLine>, p: Order) -> Result<f64> {
    Ok(p.root(cost_1d(mu, nu, p)?.to_f64()))
}
