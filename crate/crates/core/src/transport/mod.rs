//! Exact optimal transport between finitely supported measures.
//!
//! `W_p(μ,ν) = (min_γ Σ γ_st d(s,t)^p)^{1/p}` over couplings `γ` of `μ` and
//! `ν`. The minimum is attained at a vertex of the transportation polytope;
//! [`optimal_coupling`] finds it with a network simplex, [`brute_force_oracle`]
//! by vertex enumeration, and [`wasserstein_1d`] through quantile functions.

pub mod brute;
pub mod one_dim;
pub mod simplex;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::metric::{MetricSpace, Product};
use crate::scalar::{Mode, Order, Scalar};

pub use one_dim::{cost_1d, wasserstein_1d};
pub use simplex::{solve_transport, TransportPlan};

/// Atoms per side accepted by the solver in float mode.
pub const FLOAT_SIZE_LIMIT: usize = 10_000;
/// Atoms per side accepted by the solver in exact mode.
pub const EXACT_SIZE_LIMIT: usize = 1_000;

/// Joint weights over `support(μ) x support(ν)` with marginals `μ` and `ν`.
pub struct Coupling<S: Scalar, M: MetricSpace<S>> {
    rows: Measure<S, M>,
    cols: Measure<S, M>,
    matrix: Vec<S>,
}

impl<S: Scalar, M: MetricSpace<S>> Clone for Coupling<S, M> {
    fn clone(&self) -> Self {
        Coupling {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            matrix: self.matrix.clone(),
        }
    }
}

impl<S: Scalar, M: MetricSpace<S>> std::fmt::Debug for Coupling<S, M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Coupling")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl<S: Scalar, M: MetricSpace<S>> PartialEq for Coupling<S, M> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.matrix == other.matrix
    }
}

impl<S: Scalar, M: MetricSpace<S>> Coupling<S, M> {
    /// Validates shape, nonnegativity and both marginals.
    pub fn new(rows: Measure<S, M>, cols: Measure<S, M>, matrix: Vec<S>) -> Result<Self> {
        if !rows.same_space(&cols) {
            return Err(Error::SpaceMismatch);
        }
        let (m, n) = (rows.len(), cols.len());
        if matrix.len() != m * n {
            return Err(Error::InvalidCoupling(format!(
                "matrix has {} entries, expected {m}x{n}",
                matrix.len()
            )));
        }
        if let Some(x) = matrix.iter().find(|x| **x < S::zero() || !x.is_finite()) {
            return Err(Error::InvalidCoupling(format!("entry {} is negative", x.render())));
        }
        let coupling = Coupling { rows, cols, matrix };
        coupling.check_marginals()?;
        Ok(coupling)
    }

    fn check_marginals(&self) -> Result<()> {
        let tol = S::marginal_tolerance();
        let (rs, cs) = (self.row_sums(), self.col_sums());
        for (i, (s, w)) in rs.iter().zip(self.rows.weights()).enumerate() {
            if (s.clone() - w.clone()).abs() > tol {
                return Err(Error::InvalidCoupling(format!(
                    "row {i} sums to {}, expected {}",
                    s.render(),
                    w.render()
                )));
            }
        }
        for (j, (s, w)) in cs.iter().zip(self.cols.weights()).enumerate() {
            if (s.clone() - w.clone()).abs() > tol {
                return Err(Error::InvalidCoupling(format!(
                    "column {j} sums to {}, expected {}",
                    s.render(),
                    w.render()
                )));
            }
        }
        Ok(())
    }

    /// The independent coupling `μ ⊗ ν`.
    pub fn product(mu: &Measure<S, M>, nu: &Measure<S, M>) -> Result<Self> {
        let mut matrix = Vec::with_capacity(mu.len() * nu.len());
        for a in mu.weights() {
            for b in nu.weights() {
                matrix.push(a.clone() * b.clone());
            }
        }
        Coupling::new(mu.clone(), nu.clone(), matrix)
    }

    /// `Δ_*μ`: all mass on the diagonal.
    pub fn diagonal(mu: &Measure<S, M>) -> Self {
        let n = mu.len();
        let mut matrix = vec![S::zero(); n * n];
        for (i, w) in mu.weights().iter().enumerate() {
            matrix[i * n + i] = w.clone();
        }
        Coupling {
            rows: mu.clone(),
            cols: mu.clone(),
            matrix,
        }
    }

    /// Reads a coupling off a joint measure on `M x M`.
    pub fn from_joint(joint: &Measure<S, Product<M, M>>) -> Result<Self> {
        let space = joint.space();
        let rows = joint.pushforward(space.left.clone(), |(a, _)| a.clone())?;
        let cols = joint.pushforward(space.right.clone(), |(_, b)| b.clone())?;
        let n = cols.len();
        let mut matrix = vec![S::zero(); rows.len() * n];
        for ((a, b), w) in joint.iter() {
            let i = rows.position(a).ok_or(Error::SpaceMismatch)?;
            let j = cols.position(b).ok_or(Error::SpaceMismatch)?;
            matrix[i * n + j] = w.clone();
        }
        Coupling::new(rows, cols, matrix)
    }

    /// The coupling as a measure on `M x M`.
    pub fn to_joint(&self) -> Result<Measure<S, Product<M, M>>> {
        let space = Arc::new(Product::new(self.rows.space().clone(), self.cols.space().clone()));
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        for (i, a) in self.rows.atoms().iter().enumerate() {
            for (j, b) in self.cols.atoms().iter().enumerate() {
                atoms.push((a.clone(), b.clone()));
                weights.push(self.entry(i, j).clone());
            }
        }
        Measure::from_parts(space, atoms, weights)
    }

    pub fn row_measure(&self) -> &Measure<S, M> {
        &self.rows
    }

    pub fn col_measure(&self) -> &Measure<S, M> {
        &self.cols
    }

    pub fn matrix(&self) -> &[S] {
        &self.matrix
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.matrix[i * self.cols.len() + j]
    }

    pub fn row_sums(&self) -> Vec<S> {
        let n = self.cols.len();
        self.matrix
            .chunks(n)
            .map(|row| row.iter().fold(S::zero(), |acc, x| acc + x.clone()))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<S> {
        let n = self.cols.len();
        let mut sums = vec![S::zero(); n];
        for (k, x) in self.matrix.iter().enumerate() {
            sums[k % n] = sums[k % n].clone() + x.clone();
        }
        sums
    }

    /// `Σ γ_st d(s,t)^p`, recomputed from the matrix.
    pub fn cost(&self, p: Order) -> Result<S> {
        let space = self.rows.space();
        let mut total = S::zero();
        for (i, a) in self.rows.atoms().iter().enumerate() {
            for (j, b) in self.cols.atoms().iter().enumerate() {
                let x = self.entry(i, j);
                if *x != S::zero() {
                    total = total + x.clone() * space.dist(a, b).pow(p)?;
                }
            }
        }
        Ok(total)
    }

    /// Support pairs `(i, j)` with positive weight.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let n = self.cols.len();
        self.matrix
            .iter()
            .enumerate()
            .filter(|(_, x)| **x > S::zero())
            .map(|(k, _)| (k / n, k % n))
            .collect()
    }
}

/// Left and right marginals, reconstituted from the matrix sums.
pub fn marginals<S: Scalar, M: MetricSpace<S>>(
    coupling: &Coupling<S, M>,
) -> Result<(Measure<S, M>, Measure<S, M>)> {
    let rows = Measure::from_parts(
        coupling.rows.space().clone(),
        coupling.rows.atoms().to_vec(),
        coupling.row_sums(),
    )?;
    let cols = Measure::from_parts(
        coupling.cols.space().clone(),
        coupling.cols.atoms().to_vec(),
        coupling.col_sums(),
    )?;
    Ok((rows, cols))
}

/// `α +_r β`, a coupling of `μ +_r μ'` and `ν +_r ν'`.
pub fn coupling_convex_sum<S: Scalar, M: MetricSpace<S>>(
    alpha: &Coupling<S, M>,
    beta: &Coupling<S, M>,
    r: &S,
) -> Result<Coupling<S, M>> {
    if !alpha.rows.same_space(&beta.rows) {
        return Err(Error::SpaceMismatch);
    }
    let rows = alpha.rows.convex_sum(&beta.rows, r)?;
    let cols = alpha.cols.convex_sum(&beta.cols, r)?;
    if *r == S::one() {
        return Ok(alpha.clone());
    }
    if *r == S::zero() {
        return Ok(beta.clone());
    }
    let n = cols.len();
    let mut matrix = vec![S::zero(); rows.len() * n];
    let s = S::one() - r.clone();
    for (part, scale) in [(alpha, r.clone()), (beta, s)] {
        for (i, a) in part.rows.atoms().iter().enumerate() {
            let ii = rows.position(a).ok_or(Error::SpaceMismatch)?;
            for (j, b) in part.cols.atoms().iter().enumerate() {
                let x = part.entry(i, j);
                if *x == S::zero() {
                    continue;
                }
                let jj = cols.position(b).ok_or(Error::SpaceMismatch)?;
                let cell = &mut matrix[ii * n + jj];
                *cell = cell.clone() + scale.clone() * x.clone();
            }
        }
    }
    Ok(Coupling { rows, cols, matrix })
}

/// An optimal coupling together with its cost.
pub struct TransportResult<S: Scalar, M: MetricSpace<S>> {
    pub coupling: Coupling<S, M>,
    /// `Σ γ_st d(s,t)^p`; exact in exact mode.
    pub cost_p: S,
    /// `cost_p^{1/p}`.
    pub wp: f64,
    pub p: Order,
}

impl<S: Scalar, M: MetricSpace<S>> Clone for TransportResult<S, M> {
    fn clone(&self) -> Self {
        TransportResult {
            coupling: self.coupling.clone(),
            cost_p: self.cost_p.clone(),
            wp: self.wp,
            p: self.p,
        }
    }
}

impl<S: Scalar, M: MetricSpace<S>> std::fmt::Debug for TransportResult<S, M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransportResult")
            .field("p", &self.p)
            .field("cost_p", &self.cost_p)
            .field("wp", &self.wp)
            .field("coupling", &self.coupling)
            .finish()
    }
}

fn cost_matrix<S: Scalar, M: MetricSpace<S>>(
    mu: &Measure<S, M>,
    nu: &Measure<S, M>,
    p: Order,
) -> Result<Vec<S>> {
    if !mu.same_space(nu) {
        return Err(Error::SpaceMismatch);
    }
    if S::MODE == Mode::Exact && p.integer().is_none() {
        return Err(Error::NonIntegerOrder(p.value()));
    }
    let space = mu.space();
    let mut cost = Vec::with_capacity(mu.len() * nu.len());
    for a in mu.atoms() {
        for b in nu.atoms() {
            cost.push(space.dist(a, b).pow(p)?);
        }
    }
    Ok(cost)
}

fn finish<S: Scalar, M: MetricSpace<S>>(
    mu: &Measure<S, M>,
    nu: &Measure<S, M>,
    plan: TransportPlan<S>,
    p: Order,
) -> TransportResult<S, M> {
    let wp = p.root(plan.cost.to_f64().max(0.0));
    TransportResult {
        coupling: Coupling {
            rows: mu.clone(),
            cols: nu.clone(),
            matrix: plan.flow,
        },
        cost_p: plan.cost,
        wp,
        p,
    }
}

/// Optimal coupling by network simplex on the bipartite support graph.
pub fn optimal_coupling<S: Scalar, M: MetricSpace<S>>(
    mu: &Measure<S, M>,
    nu: &Measure<S, M>,
    p: Order,
) -> Result<TransportResult<S, M>> {
    let limit = match S::MODE {
        Mode::Float => FLOAT_SIZE_LIMIT,
        Mode::Exact => EXACT_SIZE_LIMIT,
    };
    if mu.len() > limit || nu.len() > limit {
        return Err(Error::TooLarge {
            rows: mu.len(),
            cols: nu.len(),
            limit,
        });
    }
    let cost = cost_matrix(mu, nu, p)?;
    let plan = solve_transport(mu.weights(), nu.weights(), &cost)?;
    Ok(finish(mu, nu, plan, p))
}

pub fn wasserstein<S: Scalar, M: MetricSpace<S>>(
    mu: &Measure<S, M>,
    nu: &Measure<S, M>,
    p: Order,
) -> Result<f64> {
    Ok(optimal_coupling(mu, nu, p)?.wp)
}

/// Ground-truth optimum by vertex enumeration; `|μ|·|ν| <= 16`.
pub fn brute_force_oracle<S: Scalar, M: MetricSpace<S>>(
    mu: &Measure<S, M>,
    nu: &Measure<S, M>,
    p: Order,
) -> Result<TransportResult<S, M>> {
    if mu.len() * nu.len() > brute::MAX_CELLS {
        return Err(Error::TooLarge {
            rows: mu.len(),
            cols: nu.len(),
            limit: brute::MAX_CELLS,
        });
    }
    let cost = cost_matrix(mu, nu, p)?;
    let plan = brute::brute_force_plan(mu.weights(), nu.weights(), &cost)?;
    Ok(finish(mu, nu, plan, p))
}
