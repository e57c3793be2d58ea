use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::solution::HalfIntegralSolution;
use super::support::SupportGraph;
use crate::error::{Error, Result};

/// All-pairs distances, with shortest paths when derived from the support graph.
#[derive(Clone, Debug)]
pub struct DistanceOracle {
    pub n: usize,
    dist: Vec<Vec<f64>>,
    /// `pred[s][t]` is the vertex before `t` on a shortest s-t path.
    pred: Option<Vec<Vec<usize>>>,
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(g: &SupportGraph, s: usize) -> (Vec<f64>, Vec<usize>) {
    let mut dist = vec![f64::INFINITY; g.n];
    let mut pred = vec![usize::MAX; g.n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Item(0.0, s));
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &eid in &g.incidence[u] {
            let e = &g.edges[eid];
            let w = e.other(u);
            let nd = d + e.cost;
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = u;
                heap.push(Item(nd, w));
            }
        }
    }
    (dist, pred)
}

/// The full matrix when given, otherwise shortest-path distances in the support graph.
pub fn metric_closure(sol: &HalfIntegralSolution, g: &SupportGraph) -> Result<DistanceOracle> {
    if let Some(m) = &sol.matrix {
        return Ok(DistanceOracle { n: sol.n, dist: m.clone(), pred: None });
    }
    let mut dist = Vec::with_capacity(g.n);
    let mut pred = Vec::with_capacity(g.n);
    for s in 0..g.n {
        let (d, p) = dijkstra(g, s);
        if d.iter().any(|x| x.is_infinite()) {
            return Err(Error::Disconnected);
        }
        dist.push(d);
        pred.push(p);
    }
    Ok(DistanceOracle { n: g.n, dist, pred: Some(pred) })
}

impl DistanceOracle {
    pub fn from_matrix(dist: Vec<Vec<f64>>) -> Self {
        DistanceOracle { n: dist.len(), dist, pred: None }
    }

    pub fn d(&self, u: usize, v: usize) -> f64 {
        self.dist[u][v]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Vertex sequence of a shortest u-v path; the direct hop when only a matrix is known.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        match &self.pred {
            None => {
                if u == v {
                    vec![u]
                } else {
                    vec![u, v]
                }
            }
            Some(pred) => {
                let mut out = vec![v];
                let mut cur = v;
                while cur != u {
                    cur = pred[u][cur];
                    out.push(cur);
                }
                out.reverse();
                out
            }
        }
    }
}
