//! Network simplex for the transportation problem on a complete bipartite
//! graph.
//!
//! Degeneracy is removed by perturbing the supplies: every source gets
//! `a_i + ε` and the last sink `b_n + m·ε`, with `ε` symbolic. Every basic
//! feasible solution of the perturbed problem is then strictly positive on
//! its spanning tree, so each pivot strictly decreases the (lexicographic)
//! objective and the method cannot cycle. The `ε` parts are dropped when
//! reporting. Pricing is a deterministic block search over cells in
//! row-major order, so plans are reproducible.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// Optimal flow on a dense `rows x cols` grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan<S> {
    pub rows: usize,
    pub cols: usize,
    pub flow: Vec<S>,
    pub cost: S,
    pub pivots: usize,
}

/// `value + eps·ε` compared lexicographically.
#[derive(Debug, Clone, PartialEq)]
struct Lex<S> {
    value: S,
    eps: i64,
}

impl<S: Scalar> Lex<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .partial_cmp(&other.value)
            .unwrap_or(Ordering::Equal)
            .then(self.eps.cmp(&other.eps))
    }

    fn add(&self, other: &Self) -> Self {
        Lex {
            value: self.value.clone() + other.value.clone(),
            eps: self.eps + other.eps,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Lex {
            value: self.value.clone() - other.value.clone(),
            eps: self.eps - other.eps,
        }
    }
}

const NONE: usize = usize::MAX;

struct Solver<'a, S> {
    m: usize,
    n: usize,
    cost: &'a [S],
    /// Basic cells with their perturbed flows; always `m + n - 1` entries.
    basis: Vec<(usize, Lex<S>)>,
    /// Basis slots incident to each node (rows `0..m`, columns `m..m+n`).
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    parent_slot: Vec<usize>,
    depth: Vec<usize>,
    potential: Vec<S>,
}

impl<'a, S: Scalar> Solver<'a, S> {
    fn endpoints(&self, cell: usize) -> (usize, usize) {
        (cell / self.n, self.m + cell % self.n)
    }

    fn attach(&mut self, slot: usize) {
        let (r, c) = self.endpoints(self.basis[slot].0);
        self.adj[r].push(slot);
        self.adj[c].push(slot);
    }

    fn detach(&mut self, slot: usize) {
        let (r, c) = self.endpoints(self.basis[slot].0);
        self.adj[r].retain(|&s| s != slot);
        self.adj[c].retain(|&s| s != slot);
    }

    /// North-west corner start on the perturbed supplies.
    fn initial_basis(&mut self, supply: &[S], demand: &[S]) {
        let (m, n) = (self.m, self.n);
        let mut ra: Vec<Lex<S>> = supply
            .iter()
            .map(|a| Lex { value: a.clone(), eps: 1 })
            .collect();
        let mut rb: Vec<Lex<S>> = demand
            .iter()
            .enumerate()
            .map(|(j, b)| Lex {
                value: b.clone(),
                eps: if j + 1 == n { m as i64 } else { 0 },
            })
            .collect();
        let (mut i, mut j) = (0, 0);
        loop {
            let cell = i * n + j;
            if i + 1 == m && j + 1 == n {
                self.basis.push((cell, ra[i].clone()));
                break;
            }
            let take_row = if i + 1 == m {
                false
            } else if j + 1 == n {
                true
            } else {
                ra[i].cmp(&rb[j]) == Ordering::Less
            };
            if take_row {
                let x = ra[i].clone();
                rb[j] = rb[j].sub(&x);
                self.basis.push((cell, x));
                i += 1;
            } else {
                let x = rb[j].clone();
                ra[i] = ra[i].sub(&x);
                self.basis.push((cell, x));
                j += 1;
            }
        }
        for slot in 0..self.basis.len() {
            self.attach(slot);
        }
    }

    /// Roots the spanning tree at row 0 and recomputes node potentials
    /// from `u_i + v_j = c_ij` on basic cells.
    fn rebuild_tree(&mut self) {
        let nodes = self.m + self.n;
        self.parent.iter_mut().for_each(|p| *p = NONE);
        self.parent_slot.iter_mut().for_each(|p| *p = NONE);
        let mut seen = vec![false; nodes];
        let mut queue = VecDeque::with_capacity(nodes);
        seen[0] = true;
        self.depth[0] = 0;
        self.potential[0] = S::zero();
        queue.push_back(0);
        while let Some(u) = queue.pop_front() {
            for k in 0..self.adj[u].len() {
                let slot = self.adj[u][k];
                let cell = self.basis[slot].0;
                let (r, c) = self.endpoints(cell);
                let v = if r == u { c } else { r };
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                self.parent[v] = u;
                self.parent_slot[v] = slot;
                self.depth[v] = self.depth[u] + 1;
                self.potential[v] = self.cost[cell].clone() - self.potential[u].clone();
                queue.push_back(v);
            }
        }
        debug_assert!(seen.iter().all(|&s| s), "basis is not a spanning tree");
    }

    fn reduced_cost(&self, cell: usize) -> S {
        let (r, c) = self.endpoints(cell);
        self.cost[cell].clone() - self.potential[r].clone() - self.potential[c].clone()
    }

    /// Tree path from row `r` to column node `c`, as basis slots in order.
    fn tree_path(&self, r: usize, c: usize) -> Vec<usize> {
        let (mut a, mut b) = (r, c);
        let mut from_a = Vec::new();
        let mut from_b = Vec::new();
        while self.depth[a] > self.depth[b] {
            from_a.push(self.parent_slot[a]);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            from_b.push(self.parent_slot[b]);
            b = self.parent[b];
        }
        while a != b {
            from_a.push(self.parent_slot[a]);
            a = self.parent[a];
            from_b.push(self.parent_slot[b]);
            b = self.parent[b];
        }
        from_b.reverse();
        from_a.extend(from_b);
        from_a
    }

    /// Moves flow around the cycle closed by `entering`; returns false if
    /// the cycle has no decreasing edge (cannot happen on bounded data).
    fn pivot(&mut self, entering: usize) -> bool {
        let (r, c) = self.endpoints(entering);
        let path = self.tree_path(r, c);
        let mut leave = NONE;
        for (k, &slot) in path.iter().enumerate() {
            if k % 2 != 0 {
                continue;
            }
            if leave == NONE {
                leave = slot;
                continue;
            }
            let ord = self.basis[slot].1.cmp(&self.basis[leave].1);
            if ord == Ordering::Less
                || (ord == Ordering::Equal && self.basis[slot].0 < self.basis[leave].0)
            {
                leave = slot;
            }
        }
        if leave == NONE {
            return false;
        }
        let theta = self.basis[leave].1.clone();
        for (k, &slot) in path.iter().enumerate() {
            let f = &self.basis[slot].1;
            self.basis[slot].1 = if k % 2 == 0 { f.sub(&theta) } else { f.add(&theta) };
        }
        self.detach(leave);
        self.basis[leave] = (entering, theta);
        self.attach(leave);
        true
    }
}

/// Solves `min Σ c_ij x_ij` subject to row sums `supply`, column sums
/// `demand`, `x >= 0`. All supplies and demands must be positive and
/// balanced (exactly in exact mode).
pub fn solve_transport<S: Scalar>(supply: &[S], demand: &[S], cost: &[S]) -> Result<TransportPlan<S>> {
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 {
        return Err(Error::EmptyMeasure);
    }
    if cost.len() != m * n {
        return Err(Error::InvalidParameter(format!(
            "cost matrix has {} entries, expected {}",
            cost.len(),
            m * n
        )));
    }
    if supply.iter().chain(demand).any(|w| *w <= S::zero()) {
        return Err(Error::InvalidParameter("supplies and demands must be positive".into()));
    }
    let total_a = supply.iter().fold(S::zero(), |acc, a| acc + a.clone());
    let total_b = demand.iter().fold(S::zero(), |acc, b| acc + b.clone());
    if (total_a.clone() - total_b.clone()).abs() > S::marginal_tolerance() {
        return Err(Error::InvalidParameter(format!(
            "unbalanced problem: supply {} vs demand {}",
            total_a.render(),
            total_b.render()
        )));
    }

    let nodes = m + n;
    let mut solver = Solver {
        m,
        n,
        cost,
        basis: Vec::with_capacity(nodes - 1),
        adj: vec![Vec::new(); nodes],
        parent: vec![NONE; nodes],
        parent_slot: vec![NONE; nodes],
        depth: vec![0; nodes],
        potential: vec![S::zero(); nodes],
    };
    solver.initial_basis(supply, demand);

    let tolerance = match S::MODE {
        Mode::Exact => S::zero(),
        Mode::Float => {
            let scale = cost
                .iter()
                .map(|c| c.abs().to_f64())
                .fold(1.0f64, f64::max);
            S::from_f64(1e-12 * scale).unwrap_or_else(S::zero)
        }
    };
    let cells = m * n;
    let block = ((cells as f64).sqrt().ceil() as usize).max(16).min(cells);
    let pivot_limit = 50 * cells + 10 * nodes + 1000;
    let mut cursor = 0usize;
    let mut pivots = 0usize;

    loop {
        solver.rebuild_tree();
        // Block search: scan at most `cells` cells starting at the cursor,
        // settle on the most negative reduced cost within the first block
        // that contains any candidate.
        let mut best: Option<(usize, S)> = None;
        let mut scanned = 0;
        while scanned < cells {
            let end = (scanned + block).min(cells);
            while scanned < end {
                let cell = (cursor + scanned) % cells;
                let rc = solver.reduced_cost(cell);
                if rc < -tolerance.clone() && best.as_ref().is_none_or(|(_, b)| rc < *b) {
                    best = Some((cell, rc));
                }
                scanned += 1;
            }
            if best.is_some() {
                break;
            }
        }
        let Some((entering, _)) = best else { break };
        cursor = (entering + 1) % cells;
        if !solver.pivot(entering) {
            return Err(Error::Unsupported("unbounded transportation problem".into()));
        }
        pivots += 1;
        if pivots > pivot_limit {
            return Err(Error::Unsupported(format!(
                "network simplex exceeded {pivot_limit} pivots"
            )));
        }
    }

    let mut flow = vec![S::zero(); cells];
    let mut total = S::zero();
    for (cell, x) in &solver.basis {
        let v = if x.value < S::zero() { S::zero() } else { x.value.clone() };
        total = total + v.clone() * cost[*cell].clone();
        flow[*cell] = v;
    }
    Ok(TransportPlan {
        rows: m,
        cols: n,
        flow,
        cost: total,
        pivots,
    })
}
