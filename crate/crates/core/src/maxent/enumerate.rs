use super::distribution::TreeDistribution;
use super::linalg::spanning_tree_count;
use crate::error::{Error, Result};
use crate::graph::{is_connected, UnionFind};
use crate::scalar::Scalar;

/// Default cap on the number of enumerated trees.
pub const TREE_CAP: usize = 200_000;

/// A spanning tree (sorted edge ids) with its probability.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedTree<S> {
    pub edges: Vec<usize>,
    pub prob: S,
}

/// Lists all spanning trees of the multigraph with their λ-uniform probabilities.
pub fn enumerate_trees<S: Scalar>(dist: &TreeDistribution<S>) -> Result<Vec<WeightedTree<S>>> {
    enumerate_trees_capped(dist, TREE_CAP)
}

pub fn enumerate_trees_capped<S: Scalar>(dist: &TreeDistribution<S>, cap: usize) -> Result<Vec<WeightedTree<S>>> {
    let count = spanning_tree_count(dist.n, &dist.ends)?;
    if count > cap as f64 {
        return Err(Error::TooManyTrees { count, cap });
    }
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(count as usize);
    let mut chosen = Vec::new();
    recurse(dist, 0, &mut chosen, &mut out);
    let weights: Vec<S> = out.iter().map(|t| t.iter().fold(S::one(), |acc, &e| acc * dist.lambda[e])).collect();
    let total: S = weights.iter().copied().sum();
    Ok(out.into_iter().zip(weights).map(|(edges, w)| WeightedTree { edges, prob: w / total }).collect())
}

fn recurse<S: Scalar>(dist: &TreeDistribution<S>, i: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let need = dist.n - 1;
    if chosen.len() == need {
        out.push(chosen.clone());
        return;
    }
    if i == dist.ends.len() || chosen.len() + (dist.ends.len() - i) < need {
        return;
    }
    let mut uf = UnionFind::new(dist.n);
    for &e in chosen.iter() {
        uf.union(dist.ends[e].0, dist.ends[e].1);
    }
    let (u, v) = dist.ends[i];
    if uf.find(u) != uf.find(v) {
        chosen.push(i);
        recurse(dist, i + 1, chosen, out);
        chosen.pop();
    }
    // excluding edge i must leave the graph connectable
    let rest = chosen.iter().map(|&e| dist.ends[e]).chain(dist.ends[i + 1..].iter().copied());
    if is_connected(dist.n, rest) {
        recurse(dist, i + 1, chosen, out);
    }
}

/// Pr[e ∈ T] under the enumerated law.
pub fn tree_marginals<S: Scalar>(trees: &[WeightedTree<S>], m: usize) -> Vec<S> {
    let mut p = vec![S::zero(); m];
    for t in trees {
        for &e in &t.edges {
            p[e] += t.prob;
        }
    }
    p
}
