//! Vertex enumeration of the transportation polytope for tiny instances.
//!
//! Every vertex is a basic feasible solution whose support lies in a
//! spanning tree of the bipartite graph `rows ∪ cols`. We enumerate every
//! `(m + n - 1)`-subset of cells, keep the ones that form a spanning tree,
//! solve the tree by peeling leaves, discard infeasible (negative) ones and
//! return the cheapest.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::transport::simplex::TransportPlan;

/// Largest number of cells (`m·n`) the enumeration accepts.
pub const MAX_CELLS: usize = 16;

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut y = x;
    while parent[y] != root {
        let next = parent[y];
        parent[y] = root;
        y = next;
    }
    root
}

fn is_spanning_tree(cells: &[usize], m: usize, n: usize) -> bool {
    let mut parent: Vec<usize> = (0..m + n).collect();
    for &cell in cells {
        let (a, b) = (find(&mut parent, cell / n), find(&mut parent, m + cell % n));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Flows on a spanning tree, or `None` when some flow is negative.
fn solve_tree<S: Scalar>(cells: &[usize], supply: &[S], demand: &[S]) -> Option<Vec<S>> {
    let (m, n) = (supply.len(), demand.len());
    let mut residual: Vec<S> = supply.iter().chain(demand).cloned().collect();
    let mut degree = vec![0usize; m + n];
    for &cell in cells {
        degree[cell / n] += 1;
        degree[m + cell % n] += 1;
    }
    let mut flow: Vec<Option<S>> = vec![None; cells.len()];
    let mut remaining = cells.len();
    while remaining > 0 {
        let mut progressed = false;
        for (k, &cell) in cells.iter().enumerate() {
            if flow[k].is_some() {
                continue;
            }
            let (r, c) = (cell / n, m + cell % n);
            let (leaf, other) = if degree[r] == 1 {
                (r, c)
            } else if degree[c] == 1 {
                (c, r)
            } else {
                continue;
            };
            let x = residual[leaf].clone();
            residual[leaf] = S::zero();
            residual[other] = residual[other].clone() - x.clone();
            degree[leaf] -= 1;
            degree[other] -= 1;
            flow[k] = Some(x);
            remaining -= 1;
            progressed = true;
        }
        if !progressed {
            return None;
        }
    }
    let flow: Vec<S> = flow.into_iter().map(|x| x.unwrap_or_else(S::zero)).collect();
    let tol = S::marginal_tolerance();
    if flow.iter().any(|x| *x < -tol.clone()) {
        return None;
    }
    if residual.iter().any(|r| r.abs() > tol) {
        return None;
    }
    Some(flow)
}

/// Exact minimizer by enumerating all basic feasible solutions.
pub fn brute_force_plan<S: Scalar>(supply: &[S], demand: &[S], cost: &[S]) -> Result<TransportPlan<S>> {
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 {
        return Err(Error::EmptyMeasure);
    }
    let cells = m * n;
    if cells > MAX_CELLS {
        return Err(Error::TooLarge {
            rows: m,
            cols: n,
            limit: MAX_CELLS,
        });
    }
    if cost.len() != cells {
        return Err(Error::InvalidParameter("cost matrix shape".into()));
    }
    let basis_size = m + n - 1;
    let mut best: Option<(S, Vec<S>)> = None;
    let mut chosen = Vec::with_capacity(basis_size);
    for mask in 0u32..(1u32 << cells) {
        if mask.count_ones() as usize != basis_size {
            continue;
        }
        chosen.clear();
        chosen.extend((0..cells).filter(|k| mask & (1 << k) != 0));
        if !is_spanning_tree(&chosen, m, n) {
            continue;
        }
        let Some(flows) = solve_tree(&chosen, supply, demand) else {
            continue;
        };
        let value = chosen
            .iter()
            .zip(&flows)
            .fold(S::zero(), |acc, (&cell, x)| acc + x.clone() * cost[cell].clone());
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            let mut dense = vec![S::zero(); cells];
            for (&cell, x) in chosen.iter().zip(flows) {
                dense[cell] = if x < S::zero() { S::zero() } else { x };
            }
            best = Some((value, dense));
        }
    }
    let (cost, flow) = best.ok_or_else(|| Error::InvalidParameter("no feasible vertex".into()))?;
    Ok(TransportPlan {
        rows: m,
        cols: n,
        flow,
        cost,
        pivots: 0,
    })
}
