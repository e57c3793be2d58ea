//! Joint laws of tree-intersection parities, either exactly from the product of
//! per-node tree laws and root pair choices, or empirically from sampled 1-trees.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::maxent::{enumerate_trees_capped, linalg::spanning_tree_count};
use crate::pipeline::PreparedInstance;
use crate::rng::{stream, Purpose};
use crate::scalar::Scalar;

/// Largest per-node tree count for which exact analysis is attempted by default.
pub const EXACT_TREE_LIMIT: usize = 10_000;

/// Distribution over bit masks; bit i is the parity of |T ∩ Fᵢ| for the i-th queried set.
pub type Joint = BTreeMap<u64, f64>;

/// Probability of the masks satisfying `pred`.
pub fn prob(joint: &Joint, pred: impl Fn(u64) -> bool) -> f64 {
    joint.iter().filter(|(&k, _)| pred(k)).map(|(_, &p)| p).sum()
}

/// One independent source of tree edges: a node's tree law or a root pair choice.
#[derive(Clone, Debug)]
struct Unit {
    support: Vec<usize>,
    outcomes: Vec<(Vec<usize>, f64)>,
}

#[derive(Clone, Debug)]
enum Law {
    Exact(Vec<Unit>),
    Sampled(Vec<Vec<usize>>),
}

#[derive(Clone, Debug)]
pub struct ParityModel {
    m: usize,
    law: Law,
}

/// How probabilities of tree events are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    Exact,
    MonteCarlo {
        trials: usize,
        seed: u64,
    },
    /// Exact when every node has at most [`EXACT_TREE_LIMIT`] trees, else 10⁵ samples.
    Auto {
        seed: u64,
    },
}

impl ParityModel {
    pub fn new<S: Scalar>(prep: &PreparedInstance<S>, method: Method) -> Result<Self> {
        match method {
            Method::Exact => Self::exact(prep, EXACT_TREE_LIMIT),
            Method::MonteCarlo { trials, seed } => Self::sampled(prep, trials, seed),
            Method::Auto { seed } => match Self::exact(prep, EXACT_TREE_LIMIT) {
                Err(Error::TooManyTrees { .. }) => Self::sampled(prep, 100_000, seed),
                other => other,
            },
        }
    }

    /// Enumerates every node's trees; fails with `TooManyTrees` past `cap` on any node.
    pub fn exact<S: Scalar>(prep: &PreparedInstance<S>, cap: usize) -> Result<Self> {
        let mut units = Vec::new();
        for law in &prep.laws {
            let count = spanning_tree_count(law.dist.n, &law.dist.ends)?;
            if count > cap as f64 {
                return Err(Error::TooManyTrees { count, cap });
            }
            let trees = enumerate_trees_capped(&law.dist, cap)?;
            let outcomes =
                trees.into_iter().map(|t| (law.to_global(&t.edges), t.prob.to_f64().unwrap_or(f64::NAN))).collect();
            units.push(Unit { support: law.edges.clone(), outcomes });
        }
        let g = &prep.graph;
        for pair in &prep.root_pairs {
            let outcomes = if pair.contains(&g.e_plus) {
                vec![(vec![g.e_plus], 1.0)]
            } else {
                vec![(vec![pair[0]], 0.5), (vec![pair[1]], 0.5)]
            };
            units.push(Unit { support: pair.to_vec(), outcomes });
        }
        Ok(ParityModel { m: g.num_edges(), law: Law::Exact(units) })
    }

    /// Draws `trials` 1-trees from per-trial estimation streams.
    pub fn sampled<S: Scalar>(prep: &PreparedInstance<S>, trials: usize, seed: u64) -> Result<Self> {
        let mut trees = Vec::with_capacity(trials);
        for t in 0..trials as u64 {
            let mut a = stream(seed, t, Purpose::Estimation);
            let mut b = ChaCha8Rng::seed_from_u64(a.gen());
            trees.push(prep.sample(&mut a, &mut b)?.edges);
        }
        Ok(ParityModel { m: prep.graph.num_edges(), law: Law::Sampled(trees) })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.law, Law::Exact(_))
    }

    /// Sample count behind the estimates, if sampled.
    pub fn trials(&self) -> Option<usize> {
        match &self.law {
            Law::Exact(_) => None,
            Law::Sampled(t) => Some(t.len()),
        }
    }

    /// Joint law of the parities of |T ∩ Fᵢ| for up to 64 edge sets.
    pub fn joint(&self, sets: &[&[usize]]) -> Joint {
        assert!(sets.len() <= 64, "at most 64 parity features");
        let mut mask = vec![0u64; self.m];
        for (i, set) in sets.iter().enumerate() {
            for &e in set.iter() {
                mask[e] ^= 1 << i;
            }
        }
        match &self.law {
            Law::Sampled(trees) => {
                let w = 1.0 / trees.len() as f64;
                let mut out = Joint::new();
                for t in trees {
                    let k = t.iter().fold(0u64, |acc, &e| acc ^ mask[e]);
                    *out.entry(k).or_insert(0.0) += w;
                }
                out
            }
            Law::Exact(units) => {
                let mut dist = Joint::from([(0u64, 1.0)]);
                for unit in units {
                    if unit.support.iter().all(|&e| mask[e] == 0) {
                        continue;
                    }
                    let mut local = Joint::new();
                    for (edges, p) in &unit.outcomes {
                        let k = edges.iter().fold(0u64, |acc, &e| acc ^ mask[e]);
                        *local.entry(k).or_insert(0.0) += p;
                    }
                    dist = xor_convolve(&dist, &local);
                }
                dist
            }
        }
    }

    /// Law of the indicator vector of `edges` in T, bit i set iff `edges[i]` ∈ T.
    pub fn indicators(&self, edges: &[usize]) -> Joint {
        let singles: Vec<[usize; 1]> = edges.iter().map(|&e| [e]).collect();
        let sets: Vec<&[usize]> = singles.iter().map(|s| &s[..]).collect();
        self.joint(&sets)
    }
}

fn xor_convolve(a: &Joint, b: &Joint) -> Joint {
    let mut out = Joint::new();
    for (&ka, &pa) in a {
        for (&kb, &pb) in b {
            *out.entry(ka ^ kb).or_insert(0.0) += pa * pb;
        }
    }
    out
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: f64, trials: f64, z: f64) -> (f64, f64) {
    if trials <= 0.0 {
        return (0.0, 1.0);
    }
    let phat = successes / trials;
    let z2 = z * z;
    let denom = 1.0 + z2 / trials;
    let center = (phat + z2 / (2.0 * trials)) / denom;
    let half = z * (phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
