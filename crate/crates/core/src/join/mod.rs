//! Minimum-cost O-joins through perfect matching on the metric closure, and
//! shortcutting of the resulting Eulerian multigraph into a tour.

mod blossom;

pub use blossom::max_weight_matching;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{DistanceOracle, SupportGraph};

/// Integer resolution of quantized distances: the largest distance maps near this value.
const QUANT_RANGE: f64 = 1e15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JoinSolution {
    /// Matched pairs, each ordered (smaller, larger), sorted.
    pub pairs: Vec<[usize; 2]>,
    /// A shortest path realizing each pair.
    pub paths: Vec<Vec<usize>>,
    pub cost: f64,
}

/// Exact minimum-weight perfect matching of `odd` under the metric.
pub fn min_ojoin(metric: &DistanceOracle, odd: &[usize]) -> Result<JoinSolution> {
    if odd.len() % 2 == 1 {
        return Err(Error::OddJoinSet(odd.len()));
    }
    let mut verts = odd.to_vec();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != odd.len() {
        return Err(Error::Parameters("O-join set has repeated vertices".into()));
    }
    let k = verts.len();
    let mut pairs = Vec::with_capacity(k / 2);
    if k == 2 {
        pairs.push([verts[0], verts[1]]);
    } else if k > 2 {
        let dmax = verts.iter().flat_map(|&a| verts.iter().map(move |&b| metric.d(a, b))).fold(0.0f64, f64::max);
        let scale = if dmax > 0.0 { QUANT_RANGE / dmax } else { 1.0 };
        let q = |a: usize, b: usize| (metric.d(a, b) * scale).round() as i64;
        let top = (dmax * scale).round() as i64 + 1;
        let mut edges = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                edges.push((i, j, top - q(verts[i], verts[j])));
            }
        }
        let mate = max_weight_matching(k, &edges, true);
        for i in 0..k {
            let j = mate[i].ok_or_else(|| Error::Internal("matching is not perfect".into()))?;
            if i < j {
                pairs.push([verts[i], verts[j]]);
            }
        }
    }
    let paths = pairs.iter().map(|&[a, b]| metric.path(a, b)).collect();
    let cost = pairs.iter().map(|&[a, b]| metric.d(a, b)).sum();
    Ok(JoinSolution { pairs, paths, cost })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    /// Vertex ids of the input solution, each once.
    pub order: Vec<usize>,
    pub cost: f64,
}

/// Eulerian circuit of the tree plus one virtual edge per matched pair, walked
/// from vertex 0 with repeats skipped. The split vertex, if any, is dropped.
pub fn shortcut(g: &SupportGraph, tree: &[usize], join: &JoinSolution, metric: &DistanceOracle) -> Result<Tour> {
    let mut ends: Vec<(usize, usize)> = tree.iter().map(|&e| g.edges[e].ends()).collect();
    ends.extend(join.pairs.iter().map(|&[a, b]| (a, b)));
    let mut adj = vec![Vec::new(); g.n];
    for (i, &(u, v)) in ends.iter().enumerate() {
        adj[u].push(i);
        adj[v].push(i);
    }
    if adj.iter().any(|a| a.len() % 2 == 1) {
        return Err(Error::Internal("tree plus join is not Eulerian".into()));
    }
    let mut used = vec![false; ends.len()];
    let mut next = vec![0usize; g.n];
    let mut stack = vec![0usize];
    let mut circuit = Vec::with_capacity(ends.len() + 1);
    while let Some(&v) = stack.last() {
        while next[v] < adj[v].len() && used[adj[v][next[v]]] {
            next[v] += 1;
        }
        if next[v] == adj[v].len() {
            circuit.push(v);
            stack.pop();
        } else {
            let e = adj[v][next[v]];
            used[e] = true;
            let (a, b) = ends[e];
            stack.push(if a == v { b } else { a });
        }
    }
    circuit.reverse();
    let dropped = g.split.as_ref().map(|s| s.new_vertex);
    let mut seen = vec![false; g.n];
    let mut order = Vec::with_capacity(g.n);
    for v in circuit {
        if !seen[v] {
            seen[v] = true;
            if Some(v) != dropped {
                order.push(v);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Internal("tree plus join is disconnected".into()));
    }
    let cost = tour_cost(&order, metric);
    Ok(Tour { order, cost })
}

/// Length of the closed walk through `order`.
pub fn tour_cost(order: &[usize], metric: &DistanceOracle) -> f64 {
    if order.len() < 2 {
        return 0.0;
    }
    (0..order.len()).map(|i| metric.d(order[i], order[(i + 1) % order.len()])).sum()
}

#[cfg(test)]
mod tests;
