//! One run of the rounding: a tree per critical set, the root cycle, and the odd vertex set.

use rand::Rng;
use serde::Serialize;

use crate::cuts::CutHierarchy;
use crate::error::{Error, Result};
use crate::graph::UnionFind;
use crate::instance::SupportGraph;
use crate::maxent::{fit_lambdas, TreeDistribution, TreeSampler};
use crate::scalar::Scalar;

/// The fitted tree law of one critical set, on its children as contracted vertices.
#[derive(Clone, Debug)]
pub struct NodeLaw<S> {
    pub node: usize,
    /// Half-edge ids of the local edges, in local edge order.
    pub edges: Vec<usize>,
    pub dist: TreeDistribution<S>,
    pub sampler: TreeSampler,
}

impl<S: Scalar> NodeLaw<S> {
    /// Maps local tree edge indices to half-edge ids.
    pub fn to_global(&self, local: &[usize]) -> Vec<usize> {
        local.iter().map(|&i| self.edges[i]).collect()
    }
}

/// Hierarchy plus one fitted distribution per critical set, shared by all trials.
#[derive(Clone, Debug)]
pub struct PreparedInstance<S> {
    pub graph: SupportGraph,
    pub hierarchy: CutHierarchy,
    pub laws: Vec<NodeLaw<S>>,
    /// Parallel pairs of the root cycle; the pair holding e⁺ is forced.
    pub root_pairs: Vec<[usize; 2]>,
    pub epsilon: S,
}

/// Local multigraph of `node`: its children as vertices and the edges first joined there.
pub fn node_graph(h: &CutHierarchy, node: usize) -> (usize, Vec<usize>, Vec<(usize, usize)>) {
    let children = &h.node(node).children;
    let pos = |c: usize| children.iter().position(|&x| x == c).expect("side is a child");
    let edges = h.internal_edges(node);
    let ends = edges.iter().map(|&e| (pos(h.role(e).side_u), pos(h.role(e).side_v))).collect();
    (children.len(), edges, ends)
}

impl<S: Scalar> PreparedInstance<S> {
    /// Fits z = ½ on the internal edges of every critical set.
    pub fn new(graph: SupportGraph, hierarchy: CutHierarchy, epsilon: S) -> Result<Self> {
        let mut laws = Vec::new();
        for node in hierarchy.internal_nodes() {
            let (k, edges, ends) = node_graph(&hierarchy, node.id);
            let z = vec![S::lit(0.5); edges.len()];
            let dist = fit_lambdas(k, ends, &z, epsilon)?;
            let sampler = TreeSampler::new(&dist);
            laws.push(NodeLaw { node: node.id, edges, dist, sampler });
        }
        let root_pairs = hierarchy.node(hierarchy.root).companions.clone();
        Ok(PreparedInstance { graph, hierarchy, laws, root_pairs, epsilon })
    }

    pub fn law_of(&self, node: usize) -> Option<&NodeLaw<S>> {
        self.laws.iter().find(|l| l.node == node)
    }

    /// Largest achieved two-sided fitting error over all nodes.
    pub fn max_fit_error(&self) -> S {
        self.laws.iter().map(|l| l.dist.two_sided_error).fold(S::zero(), |a, b| a.max(b))
    }

    /// Pr[e ∈ T] for every half-edge: ½ except the forced e⁺ (1) and its twin (0), up to fitting error.
    pub fn nominal_marginals(&self) -> Vec<f64> {
        let mut p = vec![0.5; self.graph.num_edges()];
        p[self.graph.e_plus] = 1.0;
        p[self.graph.e_plus_twin] = 0.0;
        p
    }

    pub fn sample<R1: Rng + ?Sized, R2: Rng + ?Sized>(&self, trees: &mut R1, cycle: &mut R2) -> Result<OneTree> {
        sample_one_tree(self, trees, cycle)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OneTree {
    /// Sorted half-edge ids, including e⁺.
    pub edges: Vec<usize>,
    /// (node id, half-edges sampled there) for each critical set, in contraction order.
    pub per_node: Vec<(usize, Vec<usize>)>,
    /// The copy chosen from each root pair, in root-cycle order.
    pub root_choice: Vec<usize>,
    pub odd: Vec<usize>,
}

impl OneTree {
    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn cost(&self, g: &SupportGraph) -> f64 {
        self.edges.iter().map(|&e| g.edges[e].cost).sum()
    }

    /// Membership indicator over all half-edges.
    pub fn indicator(&self, m: usize) -> Vec<bool> {
        let mut x = vec![false; m];
        for &e in &self.edges {
            x[e] = true;
        }
        x
    }
}

/// Vertices of odd degree in the edge multiset.
pub fn odd_set(g: &SupportGraph, edges: &[usize]) -> Vec<usize> {
    let mut deg = vec![0usize; g.n];
    for &e in edges {
        deg[g.edges[e].u] += 1;
        deg[g.edges[e].v] += 1;
    }
    (0..g.n).filter(|&v| deg[v] % 2 == 1).collect()
}

/// Samples trees bottom-up from the fitted laws and a root cycle through e⁺.
pub fn sample_one_tree<S: Scalar, R1: Rng + ?Sized, R2: Rng + ?Sized>(
    prep: &PreparedInstance<S>,
    trees: &mut R1,
    cycle: &mut R2,
) -> Result<OneTree> {
    let g = &prep.graph;
    let mut edges = Vec::with_capacity(g.n);
    let mut per_node = Vec::with_capacity(prep.laws.len());
    for law in &prep.laws {
        let part = law.to_global(&law.sampler.sample(trees));
        edges.extend_from_slice(&part);
        per_node.push((law.node, part));
    }
    let mut root_choice = Vec::with_capacity(prep.root_pairs.len());
    for pair in &prep.root_pairs {
        let pick = if pair.contains(&g.e_plus) {
            g.e_plus
        } else if cycle.gen::<bool>() {
            pair[1]
        } else {
            pair[0]
        };
        root_choice.push(pick);
    }
    edges.extend_from_slice(&root_choice);
    edges.sort_unstable();
    check_one_tree(g, &edges)?;
    let odd = odd_set(g, &edges);
    Ok(OneTree { edges, per_node, root_choice, odd })
}

/// T minus e⁺ must be a spanning tree.
fn check_one_tree(g: &SupportGraph, edges: &[usize]) -> Result<()> {
    if edges.len() != g.n || edges.binary_search(&g.e_plus).is_err() {
        return Err(Error::Internal(format!("1-tree has {} edges, expected {} including e⁺", edges.len(), g.n)));
    }
    let mut uf = UnionFind::new(g.n);
    for &e in edges.iter().filter(|&&e| e != g.e_plus) {
        if !uf.union(g.edges[e].u, g.edges[e].v) {
            return Err(Error::Internal("sampled edges contain a cycle besides e⁺".into()));
        }
    }
    Ok(())
}
