use rand::Rng;

use super::distribution::TreeDistribution;
use crate::scalar::Scalar;

/// Exact sampler for a λ-uniform tree law by weighted loop-erased random walks.
#[derive(Clone, Debug)]
pub struct TreeSampler {
    n: usize,
    /// Per vertex: (edge id, other end, cumulative weight).
    steps: Vec<Vec<(usize, usize, f64)>>,
}

impl TreeSampler {
    pub fn new<S: Scalar>(dist: &TreeDistribution<S>) -> Self {
        let mut steps: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); dist.n];
        for (e, (&(u, v), l)) in dist.ends.iter().zip(&dist.lambda).enumerate() {
            if u == v {
                continue;
            }
            let w = l.to_f64().expect("finite weight");
            steps[u].push((e, v, w));
            steps[v].push((e, u, w));
        }
        for list in &mut steps {
            let mut acc = 0.0;
            for s in list.iter_mut() {
                acc += s.2;
                s.2 = acc;
            }
        }
        TreeSampler { n: dist.n, steps }
    }

    fn step<R: Rng + ?Sized>(&self, u: usize, rng: &mut R) -> (usize, usize) {
        let list = &self.steps[u];
        let total = list.last().expect("connected graph").2;
        let r = rng.gen::<f64>() * total;
        let i = list.partition_point(|s| s.2 <= r).min(list.len() - 1);
        (list[i].0, list[i].1)
    }

    /// Edge ids of one spanning tree, sorted.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut in_tree = vec![false; self.n];
        let mut next = vec![(usize::MAX, usize::MAX); self.n];
        let mut tree = Vec::with_capacity(self.n.saturating_sub(1));
        if self.n == 0 {
            return tree;
        }
        in_tree[0] = true;
        for start in 1..self.n {
            let mut u = start;
            while !in_tree[u] {
                next[u] = self.step(u, rng);
                u = next[u].1;
            }
            u = start;
            while !in_tree[u] {
                in_tree[u] = true;
                tree.push(next[u].0);
                u = next[u].1;
            }
        }
        tree.sort_unstable();
        tree
    }
}

/// One exact draw from the distribution.
pub fn sample_tree<S: Scalar, R: Rng + ?Sized>(dist: &TreeDistribution<S>, rng: &mut R) -> Vec<usize> {
    TreeSampler::new(dist).sample(rng)
}
