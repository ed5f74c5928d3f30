//! Random instances for law checks and tests.
//!
//! Draws favour endpoints and coincidences (repeated atoms, `r ∈ {0, 1}`)
//! since that is where skew laws break in a careless implementation.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::measure::Measure;
use crate::metric::{Euclidean, FiniteMetric, MetricSpace, RealLine};
use crate::scalar::Scalar;

/// Spaces that can produce random members.
pub trait RandomPoint<S: Scalar>: MetricSpace<S> {
    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Point;
}

/// Points `k/24` of `[0, 1]`; the coarse grid makes coincident atoms common.
impl<S: Scalar> RandomPoint<S> for RealLine {
    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> S {
        if rng.gen_bool(0.25) {
            S::from_ratio(rng.gen_range(0..=4), 4)
        } else {
            S::from_ratio(rng.gen_range(0..=24), 24)
        }
    }
}

/// Uniform in the unit box.
impl RandomPoint<f64> for Euclidean {
    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dim()).map(|_| rng.gen::<f64>()).collect()
    }
}

impl<S: Scalar> RandomPoint<S> for FiniteMetric<S> {
    fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.gen_range(0..self.len())
    }
}

const WEIGHT_GRID: [(i64, i64); 9] = [(0, 1), (1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 8), (7, 8)];

/// A weight in `[0, 1]`: half the time from a grid containing both
/// endpoints, otherwise `k/den` with `den <= 64`.
pub fn random_weight<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
    if rng.gen_bool(0.5) {
        let &(n, d) = WEIGHT_GRID.choose(rng).expect("non-empty grid");
        S::from_ratio(n, d)
    } else {
        let den = rng.gen_range(1..=64);
        S::from_ratio(rng.gen_range(0..=den), den)
    }
}

/// A dyadic `num / 2^k` with `k <= max_k`.
pub fn random_dyadic<R: Rng + ?Sized>(rng: &mut R, max_k: u32) -> (u64, u64) {
    let den = 1u64 << rng.gen_range(0..=max_k);
    (rng.gen_range(0..=den), den)
}

/// Normalized integer weights `w_i / Σ w`, each `w_i ∈ 1..=9`.
pub fn random_simplex<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<S> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| S::from_ratio(w, total)).collect()
}

/// Like [`random_simplex`] but some entries may be zero (at least one is
/// positive).
pub fn random_sparse_simplex<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<S> {
    let mut raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
    if raw.iter().all(|&w| w == 0) {
        let k = rng.gen_range(0..n);
        raw[k] = 1;
    }
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| S::from_ratio(w, total)).collect()
}

/// A measure with `1..=max_atoms` atoms (before coalescing).
pub fn random_measure<S, M, R>(space: &Arc<M>, rng: &mut R, max_atoms: usize) -> Result<Measure<S, M>>
where
    S: Scalar,
    M: RandomPoint<S>,
    R: Rng + ?Sized,
{
    let n = rng.gen_range(1..=max_atoms.max(1));
    let atoms = (0..n).map(|_| space.random_point(rng)).collect();
    Measure::new(space.clone(), atoms, random_simplex(rng, n))
}

/// Shortest-path metric of a complete graph with random integer edge
/// lengths `1..=10`, scaled so the diameter is 1. Always a metric.
#[allow(clippy::needless_range_loop)]
pub fn random_finite_metric<S: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<FiniteMetric<S>> {
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=10);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let diameter = d.iter().flatten().copied().max().unwrap_or(0).max(1);
    let rows = d
        .iter()
        .map(|row| row.iter().map(|&x| S::from_ratio(x, diameter)).collect())
        .collect();
    FiniteMetric::new(rows)
}
