use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{stoer_wagner, UnionFind};
use crate::instance::SupportGraph;
use crate::vset::VertexSet;

/// A vertex set whose boundary is a minimum cut, stored on the side without vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightSet {
    pub members: VertexSet,
    pub boundary: Vec<usize>,
}

impl TightSet {
    pub fn new(g: &SupportGraph, side: &VertexSet) -> Self {
        let members = side.canonical();
        let boundary = g.boundary(|v| members.contains(v));
        TightSet { members, boundary }
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.boundary.contains(&e)
    }

    /// Both sides have at least two vertices of the original graph.
    pub fn is_proper(&self) -> bool {
        self.members.len() >= 2 && self.members.ground() - self.members.len() >= 2
    }
}

/// True iff all four regions of the two sets are nonempty.
pub fn crosses(a: &TightSet, b: &TightSet) -> bool {
    a.members.crosses(&b.members)
}

/// Largest vertex count handled by the exhaustive subset scan.
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    /// Random contraction runs are ⌈factor · n² · ln n⌉.
    pub karger_factor: f64,
    pub seed: u64,
    pub exhaustive_limit: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig { karger_factor: 3.0, seed: 0x6d69_6e63_7574, exhaustive_limit: EXHAUSTIVE_LIMIT }
    }
}

/// All vertex bipartitions crossed by exactly four half-edges, sorted lexicographically.
pub fn enumerate_min_cuts(g: &SupportGraph) -> Result<Vec<TightSet>> {
    enumerate_min_cuts_with(g, &EnumerationConfig::default())
}

pub fn enumerate_min_cuts_with(g: &SupportGraph, cfg: &EnumerationConfig) -> Result<Vec<TightSet>> {
    let (value, _) = stoer_wagner(g.n, g.pairs());
    if value != 4 {
        return Err(Error::MinCutValue { found: value, expected: 4 });
    }
    let sides = if g.n <= cfg.exhaustive_limit { exhaustive(g) } else { random_contraction(g, cfg) };
    let mut cuts: Vec<TightSet> = sides.into_iter().map(|s| TightSet::new(g, &s)).collect();
    cuts.sort_by(|a, b| a.members.cmp_lex(&b.members));
    let bound = g.n * (g.n - 1) / 2;
    if cuts.len() > bound {
        return Err(Error::Internal(format!("{} min cuts exceeds the n(n-1)/2 bound {bound}", cuts.len())));
    }
    Ok(cuts)
}

fn exhaustive(g: &SupportGraph) -> BTreeSet<VertexSet> {
    let n = g.n;
    let ends: Vec<(u64, u64)> = g.edges.iter().map(|e| (1u64 << e.u, 1u64 << e.v)).collect();
    let mut out = BTreeSet::new();
    // subsets of {1, .., n-1}, shifted past vertex 0
    for half in 1u64..(1u64 << (n - 1)) {
        let mask = half << 1;
        let crossing = ends.iter().filter(|&&(a, b)| (mask & a != 0) != (mask & b != 0)).count();
        if crossing == 4 {
            out.insert(VertexSet::from_mask(n, mask));
        }
    }
    out
}

fn random_contraction(g: &SupportGraph, cfg: &EnumerationConfig) -> BTreeSet<VertexSet> {
    let n = g.n;
    let nf = n as f64;
    let runs = (cfg.karger_factor * nf * nf * nf.ln()).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    let mut out = BTreeSet::new();
    for _ in 0..runs {
        order.shuffle(&mut rng);
        let mut uf = UnionFind::new(n);
        for &e in &order {
            if uf.components() == 2 {
                break;
            }
            uf.union(g.edges[e].u, g.edges[e].v);
        }
        let root0 = uf.find(0);
        let side = VertexSet::from_members(n, (0..n).filter(|&v| uf.find(v) != root0));
        let crossing = g.edges.iter().filter(|e| side.contains(e.u) != side.contains(e.v)).count();
        if crossing == 4 {
            out.insert(side);
        }
    }
    out
}
