use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::enumerate::{crosses, enumerate_min_cuts, TightSet};
use crate::error::{Error, Result};
use crate::instance::SupportGraph;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Leaf,
    DegreeCut,
    CycleCut,
    RootCycle,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyNode {
    pub id: usize,
    pub kind: NodeKind,
    pub members: VertexSet,
    /// For cycle cuts, ordered from the neighbor of the outside; for the root, cyclic from vertex 0.
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    /// The four boundary half-edges; empty for the root.
    pub boundary: Vec<usize>,
    /// Two pairs of boundary half-edges sharing an endpoint child (cycle cuts only).
    pub partners: Vec<[usize; 2]>,
    /// Parallel pairs between consecutive children (cycle cuts and root).
    pub companions: Vec<[usize; 2]>,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Top,
    Bottom,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeRole {
    pub edge: usize,
    pub class: EdgeClass,
    /// Lowest hierarchy node containing both endpoints.
    pub lca: usize,
    /// Child of `lca` containing the edge's `u` endpoint.
    pub side_u: usize,
    /// Child of `lca` containing the edge's `v` endpoint.
    pub side_v: usize,
    pub last_cuts: [TightSet; 2],
    pub companion: Option<usize>,
    /// (cycle node, partner half-edge) for every cycle cut where this edge has a partner.
    pub partners: Vec<(usize, usize)>,
}

/// The critical sets chosen by the contraction loop, with per-edge roles.
#[derive(Clone, Debug, Serialize)]
pub struct CutHierarchy {
    pub n: usize,
    pub nodes: Vec<HierarchyNode>,
    pub root: usize,
    pub roles: Vec<EdgeRole>,
    pub e_plus: usize,
    pub e_plus_twin: usize,
    #[serde(skip)]
    pub min_cuts: Vec<TightSet>,
}

fn node_count(side: &VertexSet, node_of: &[usize]) -> usize {
    side.members().map(|v| node_of[v]).collect::<BTreeSet<_>>().len()
}

/// Cyclic order of `k` nodes if their multigraph is a cycle with two parallel edges per step.
fn doubled_cycle_order(
    k: usize,
    adj: &BTreeMap<(usize, usize), Vec<usize>>,
    start: usize,
    first: Option<usize>,
) -> Option<Vec<usize>> {
    let mut nbrs = vec![Vec::new(); k];
    for (&(a, b), es) in adj {
        if es.len() != 2 {
            return None;
        }
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    if nbrs.iter().any(|l| l.len() != 2) {
        return None;
    }
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = first.unwrap_or(nbrs[start][0]);
    if !nbrs[start].contains(&cur) {
        return None;
    }
    while cur != start {
        order.push(cur);
        let next = if nbrs[cur][0] == prev { nbrs[cur][1] } else { nbrs[cur][0] };
        prev = cur;
        cur = next;
        if order.len() > k {
            return None;
        }
    }
    (order.len() == k).then_some(order)
}

/// Runs the contraction loop on the min cuts of `g`.
pub fn build_hierarchy(g: &SupportGraph) -> Result<CutHierarchy> {
    let cuts = enumerate_min_cuts(g)?;
    build_from_cuts(g, cuts)
}

pub fn build_from_cuts(g: &SupportGraph, cuts: Vec<TightSet>) -> Result<CutHierarchy> {
    let n = g.n;
    let (pu, pv) = g.edges[g.e_plus].ends();
    let mut nodes: Vec<HierarchyNode> = (0..n)
        .map(|v| HierarchyNode {
            id: v,
            kind: NodeKind::Leaf,
            members: VertexSet::from_members(n, [v]),
            children: vec![],
            parent: None,
            boundary: g.incidence[v].clone(),
            partners: vec![],
            companions: vec![],
            depth: 0,
        })
        .collect();
    let mut node_of: Vec<usize> = (0..n).collect();
    let m = cuts.len();
    let mut current = vec![true; m];
    let mut cross_count = vec![0usize; m];
    for i in 0..m {
        for j in i + 1..m {
            if crosses(&cuts[i], &cuts[j]) {
                cross_count[i] += 1;
                cross_count[j] += 1;
            }
        }
    }

    loop {
        let mut candidates: Vec<VertexSet> = Vec::new();
        for i in (0..m).filter(|&i| current[i] && cross_count[i] == 0) {
            let x = &cuts[i].members;
            let y = x.complement();
            if node_count(x, &node_of) < 2 || node_count(&y, &node_of) < 2 {
                continue;
            }
            for side in [x.clone(), y] {
                if !(side.contains(pu) && side.contains(pv)) {
                    candidates.push(side);
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let minimal: Vec<&VertexSet> =
            candidates.iter().filter(|c| !candidates.iter().any(|d| d.len() < c.len() && d.is_subset(c))).collect();
        let s =
            (*minimal.iter().min_by(|a, b| a.canonical().cmp_lex(&b.canonical()).then_with(|| a.cmp_lex(b))).unwrap())
                .clone();

        let children: Vec<usize> = s.members().map(|v| node_of[v]).collect::<BTreeSet<_>>().into_iter().collect();
        let k = children.len();
        let idx: BTreeMap<usize, usize> = children.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let outside = k;
        let place = |v: usize| if s.contains(v) { idx[&node_of[v]] } else { outside };
        let mut adj: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for e in &g.edges {
            if !s.contains(e.u) && !s.contains(e.v) {
                continue;
            }
            let (a, b) = (place(e.u), place(e.v));
            if a != b {
                adj.entry((a.min(b), a.max(b))).or_default().push(e.id);
            }
        }
        let boundary = g.boundary(|v| s.contains(v));
        let id = nodes.len();
        let mut node = HierarchyNode {
            id,
            kind: NodeKind::DegreeCut,
            members: s.clone(),
            children: children.clone(),
            parent: None,
            boundary: boundary.clone(),
            partners: vec![],
            companions: vec![],
            depth: 0,
        };
        // neighbors of the outside node, lexicographically smaller one first
        let mut w_nbrs: Vec<usize> = adj.keys().filter(|&&(_, b)| b == outside).map(|&(a, _)| a).collect();
        w_nbrs.sort_by(|&a, &b| nodes[children[a]].members.cmp_lex(&nodes[children[b]].members));
        let order = if w_nbrs.len() == 2 { doubled_cycle_order(k + 1, &adj, outside, Some(w_nbrs[0])) } else { None };
        match order {
            Some(order) => {
                node.kind = NodeKind::CycleCut;
                let seq: Vec<usize> = order[1..].to_vec();
                node.children = seq.iter().map(|&i| children[i]).collect();
                let pair = |a: usize, b: usize| -> [usize; 2] {
                    let es = &adj[&(a.min(b), a.max(b))];
                    [es[0], es[1]]
                };
                node.partners = vec![pair(seq[0], outside), pair(seq[k - 1], outside)];
                node.companions = seq.windows(2).map(|w| pair(w[0], w[1])).collect();
            }
            None => {
                for (&(a, b), es) in &adj {
                    if b == outside && es.len() >= 2 {
                        return Err(Error::Hierarchy(format!(
                            "degree cut {:?} has child {} with {} edges to the outside",
                            s,
                            children[a],
                            es.len()
                        )));
                    }
                }
                for (i, cut) in cuts.iter().enumerate() {
                    if !current[i] {
                        continue;
                    }
                    for side in [cut.members.clone(), cut.members.complement()] {
                        if side.len() < s.len() && side.is_subset(&s) && node_count(&side, &node_of) >= 2 {
                            return Err(Error::Hierarchy(format!(
                                "degree cut {:?} contains proper tight set {:?}",
                                s, side
                            )));
                        }
                    }
                }
            }
        }
        for &c in &children {
            nodes[c].parent = Some(id);
        }
        for v in s.members() {
            node_of[v] = id;
        }
        nodes.push(node);

        let removed: Vec<usize> = (0..m)
            .filter(|&j| current[j] && cuts[j].members.intersects(&s) && !s.is_subset(&cuts[j].members))
            .collect();
        for &j in &removed {
            current[j] = false;
        }
        for &j in &removed {
            for i in 0..m {
                if i != j && crosses(&cuts[i], &cuts[j]) {
                    cross_count[i] -= 1;
                }
            }
        }
    }

    // root: remaining nodes must form a doubled cycle of length at least 3
    let tops: Vec<usize> = node_of.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let k = tops.len();
    if k < 3 {
        return Err(Error::Hierarchy(format!("final graph has {k} nodes, expected at least 3")));
    }
    let idx: BTreeMap<usize, usize> = tops.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut adj: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in &g.edges {
        let (a, b) = (idx[&node_of[e.u]], idx[&node_of[e.v]]);
        if a != b {
            adj.entry((a.min(b), a.max(b))).or_default().push(e.id);
        }
    }
    let start = idx[&node_of[0]];
    let mut nb: Vec<usize> = adj
        .keys()
        .filter_map(|&(a, b)| {
            if a == start {
                Some(b)
            } else if b == start {
                Some(a)
            } else {
                None
            }
        })
        .collect();
    nb.sort_by(|&a, &b| nodes[tops[a]].members.cmp_lex(&nodes[tops[b]].members));
    let order = doubled_cycle_order(k, &adj, start, nb.first().copied())
        .ok_or_else(|| Error::Hierarchy("final graph is not a doubled cycle".into()))?;
    let root = nodes.len();
    let pair = |a: usize, b: usize| -> [usize; 2] {
        let es = &adj[&(a.min(b), a.max(b))];
        [es[0], es[1]]
    };
    let companions = (0..k).map(|i| pair(order[i], order[(i + 1) % k])).collect();
    for &t in &tops {
        nodes[t].parent = Some(root);
    }
    nodes.push(HierarchyNode {
        id: root,
        kind: NodeKind::RootCycle,
        members: VertexSet::from_members(n, 0..n),
        children: order.iter().map(|&i| tops[i]).collect(),
        parent: None,
        boundary: vec![],
        partners: vec![],
        companions,
        depth: 0,
    });
    // depths, top-down; parents always have larger ids
    for id in (0..root).rev() {
        let p = nodes[id].parent.expect("non-root node has a parent");
        nodes[id].depth = nodes[p].depth + 1;
    }

    let mut h = CutHierarchy {
        n,
        nodes,
        root,
        roles: Vec::new(),
        e_plus: g.e_plus,
        e_plus_twin: g.e_plus_twin,
        min_cuts: cuts,
    };
    h.roles = (0..g.edges.len()).map(|e| h.compute_role(g, e)).collect();
    Ok(h)
}

impl CutHierarchy {
    pub fn node(&self, id: usize) -> &HierarchyNode {
        &self.nodes[id]
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.nodes[id].parent
    }

    /// Nodes from `id` up to the root, inclusive.
    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut out = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Lowest common ancestor with the children of it on the paths to `a` and `b`.
    fn lca_with_sides(&self, a: usize, b: usize) -> (usize, usize, usize) {
        let pa = self.ancestors(a);
        let pb = self.ancestors(b);
        let (mut i, mut j) = (pa.len() - 1, pb.len() - 1);
        while i > 0 && j > 0 && pa[i - 1] == pb[j - 1] {
            i -= 1;
            j -= 1;
        }
        (pa[i], pa[i - 1], pb[j - 1])
    }

    fn compute_role(&self, g: &SupportGraph, e: usize) -> EdgeRole {
        let he = g.edges[e];
        let (lca, side_u, side_v) = self.lca_with_sides(he.u, he.v);
        let node = &self.nodes[lca];
        let class = if node.kind == NodeKind::DegreeCut { EdgeClass::Top } else { EdgeClass::Bottom };
        let last_cuts = if node.kind == NodeKind::CycleCut {
            let pu = node.children.iter().position(|&c| c == side_u).unwrap();
            let pv = node.children.iter().position(|&c| c == side_v).unwrap();
            let lo = pu.min(pv);
            let arc = |range: std::ops::Range<usize>| {
                let mut s = VertexSet::empty(self.n);
                for &c in &node.children[range] {
                    s.union_with(&self.nodes[c].members);
                }
                TightSet::new(g, &s)
            };
            [arc(0..lo + 1), arc(lo + 1..node.children.len())]
        } else {
            [TightSet::new(g, &self.nodes[side_u].members), TightSet::new(g, &self.nodes[side_v].members)]
        };
        let companion = node.companions.iter().find_map(|p| {
            if p[0] == e {
                Some(p[1])
            } else if p[1] == e {
                Some(p[0])
            } else {
                None
            }
        });
        let mut partners = Vec::new();
        for n in self.nodes.iter().filter(|n| n.kind == NodeKind::CycleCut) {
            for p in &n.partners {
                if p[0] == e {
                    partners.push((n.id, p[1]));
                } else if p[1] == e {
                    partners.push((n.id, p[0]));
                }
            }
        }
        EdgeRole { edge: e, class, lca, side_u, side_v, last_cuts, companion, partners }
    }

    pub fn role(&self, e: usize) -> &EdgeRole {
        &self.roles[e]
    }

    pub fn is_top(&self, e: usize) -> bool {
        self.roles[e].class == EdgeClass::Top
    }

    pub fn is_bottom(&self, e: usize) -> bool {
        self.roles[e].class == EdgeClass::Bottom
    }

    /// The two last cuts of `e`; undefined for the designated unit edge.
    pub fn last_cuts(&self, e: usize) -> Result<&[TightSet; 2]> {
        if e == self.e_plus {
            return Err(Error::Hierarchy("the designated unit edge has no last cuts".into()));
        }
        Ok(&self.roles[e].last_cuts)
    }

    /// `e` lies on the boundary of `node` and of its parent.
    pub fn goes_higher(&self, e: usize, node: usize) -> bool {
        let n = &self.nodes[node];
        match n.parent {
            Some(p) => n.boundary.contains(&e) && self.nodes[p].boundary.contains(&e),
            None => false,
        }
    }

    /// Half-edges whose endpoints first meet at `node`: the edges a tree at that node chooses from.
    pub fn internal_edges(&self, node: usize) -> Vec<usize> {
        self.roles.iter().filter(|r| r.lca == node).map(|r| r.edge).collect()
    }

    /// Non-leaf, non-root nodes in creation order.
    pub fn internal_nodes(&self) -> impl Iterator<Item = &HierarchyNode> {
        self.nodes.iter().filter(|n| matches!(n.kind, NodeKind::DegreeCut | NodeKind::CycleCut))
    }

    /// Every min cut, read off the hierarchy: boundaries of leaves and degree cuts,
    /// contiguous arcs of each cycle cut, and arcs of the root cycle.
    pub fn min_cuts_from_hierarchy(&self, g: &SupportGraph) -> Vec<TightSet> {
        let mut sides: BTreeSet<VertexSet> = BTreeSet::new();
        for node in &self.nodes {
            match node.kind {
                NodeKind::Leaf | NodeKind::DegreeCut => {
                    sides.insert(node.members.canonical());
                }
                NodeKind::CycleCut => {
                    let k = node.children.len();
                    for i in 0..k {
                        let mut s = VertexSet::empty(self.n);
                        for &c in &node.children[i..] {
                            s.union_with(&self.nodes[c].members);
                            sides.insert(s.canonical());
                        }
                    }
                }
                NodeKind::RootCycle => {
                    let k = node.children.len();
                    for i in 0..k {
                        let mut s = VertexSet::empty(self.n);
                        for len in 1..k {
                            s.union_with(&self.nodes[node.children[(i + len - 1) % k]].members);
                            sides.insert(s.canonical());
                        }
                    }
                }
            }
        }
        let mut out: Vec<TightSet> = sides.iter().map(|s| TightSet::new(g, s)).collect();
        out.sort_by(|a, b| a.members.cmp_lex(&b.members));
        out
    }

    /// Min cuts whose boundary contains `e`.
    pub fn min_cuts_containing(&self, e: usize) -> Vec<&TightSet> {
        self.min_cuts.iter().filter(|c| c.contains_edge(e)).collect()
    }

    /// Structural facts the analysis relies on; returns one message per violation.
    pub fn check_facts(&self, g: &SupportGraph) -> Vec<String> {
        let mut bad = Vec::new();
        let derived = self.min_cuts_from_hierarchy(g);
        if derived != self.min_cuts {
            bad.push(format!(
                "hierarchy yields {} min cuts but enumeration found {}",
                derived.len(),
                self.min_cuts.len()
            ));
        }
        for (i, a) in self.min_cuts.iter().enumerate() {
            for b in &self.min_cuts[i + 1..] {
                if !crosses(a, b) {
                    continue;
                }
                if a.boundary.iter().any(|e| b.boundary.contains(e)) {
                    bad.push(format!("crossing cuts {:?} and {:?} share an edge", a.members, b.members));
                }
                let x = &a.members;
                let y = &b.members;
                for corner in [x.intersection(y), x.difference(y), y.difference(x), x.union(y).complement()] {
                    if g.boundary(|v| corner.contains(v)).len() != 4 {
                        bad.push(format!("corner {corner:?} of crossing cuts is not tight"));
                    }
                }
            }
        }
        let root = &self.nodes[self.root];
        if root.children.len() < 3 {
            bad.push("root cycle has fewer than 3 nodes".into());
        }
        for node in self.internal_nodes() {
            if node.boundary.contains(&self.e_plus) || node.boundary.contains(&self.e_plus_twin) {
                bad.push(format!("unit edge on critical cut of node {}", node.id));
            }
            if node.boundary.len() != 4 {
                bad.push(format!("node {} has boundary of size {}", node.id, node.boundary.len()));
            }
        }
        let critical: Vec<&HierarchyNode> = self.nodes.iter().filter(|n| n.kind != NodeKind::RootCycle).collect();
        for (i, a) in critical.iter().enumerate() {
            for b in &critical[i + 1..] {
                let shared = a.boundary.iter().filter(|e| b.boundary.contains(e)).count();
                if shared > 2 {
                    bad.push(format!("critical sets {} and {} share {shared} boundary edges", a.id, b.id));
                }
                let (lo, hi) = if a.members.is_subset(&b.members) { (a, b) } else { (b, a) };
                if shared == 2 && lo.members.is_subset(&hi.members) && hi.kind != NodeKind::CycleCut {
                    bad.push(format!(
                        "node {} shares two edges with descendant {} but is not a cycle cut",
                        hi.id, lo.id
                    ));
                }
            }
        }
        let mut partner_pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for node in self.nodes.iter().filter(|n| n.kind == NodeKind::CycleCut) {
            for p in &node.partners {
                *partner_pairs.entry((p[0].min(p[1]), p[0].max(p[1]))).or_default() += 1;
            }
        }
        for (pair, count) in partner_pairs {
            if count > 1 {
                bad.push(format!("edges {pair:?} are cycle partners on {count} cycle cuts"));
            }
        }
        for r in &self.roles {
            if r.class != EdgeClass::Bottom {
                continue;
            }
            match r.companion {
                None => bad.push(format!("bottom edge {} has no companion", r.edge)),
                Some(c) => {
                    if r.edge != self.e_plus && c != self.e_plus {
                        let mine: BTreeSet<_> = r.last_cuts.iter().map(|t| t.members.clone()).collect();
                        let theirs: BTreeSet<_> = self.roles[c].last_cuts.iter().map(|t| t.members.clone()).collect();
                        if mine != theirs {
                            bad.push(format!("companions {} and {c} have different last cuts", r.edge));
                        }
                    }
                }
            }
        }
        for node in self.nodes.iter().filter(|n| n.kind != NodeKind::RootCycle) {
            let low_bottom: Vec<usize> =
                node.boundary.iter().copied().filter(|&e| self.is_bottom(e) && !self.goes_higher(e, node.id)).collect();
            if low_bottom.len() == 2 {
                let rest_go_higher =
                    node.boundary.iter().filter(|e| !low_bottom.contains(e)).all(|&e| self.goes_higher(e, node.id));
                if !rest_go_higher {
                    bad.push(format!("node {}: two low bottom edges but the others do not go higher", node.id));
                }
            }
        }
        bad
    }
}
