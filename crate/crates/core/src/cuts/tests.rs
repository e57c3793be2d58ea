use std::collections::BTreeSet;

use super::*;
use crate::generate::{doubled_cycle, k4_chain, nested_cycle, two_cycle_gadgets, CostModel};
use crate::instance::{HalfIntegralSolution, SupportGraph};
use crate::vset::VertexSet;

fn support(sol: &HalfIntegralSolution) -> SupportGraph {
    SupportGraph::from_solution(sol).unwrap().1
}

/// Critical sets found by re-running the contraction loop with brute force over subsets of current nodes.
fn oracle_critical_sets(g: &SupportGraph) -> Vec<BTreeSet<usize>> {
    let mut nodes: Vec<BTreeSet<usize>> = (0..g.n).map(|v| BTreeSet::from([v])).collect();
    let (pu, pv) = g.edges[g.e_plus].ends();
    let mut found = Vec::new();
    loop {
        let k = nodes.len();
        let expand = |mask: u64| -> BTreeSet<usize> {
            (0..k).filter(|i| mask >> i & 1 == 1).flat_map(|i| nodes[i].iter().copied()).collect()
        };
        let cut_size = |s: &BTreeSet<usize>| g.edges.iter().filter(|e| s.contains(&e.u) != s.contains(&e.v)).count();
        let full = (1u64 << k) - 1;
        let tight: Vec<u64> = (1..full).filter(|&m| cut_size(&expand(m)) == 4).collect();
        let cross = |a: u64, b: u64| a & b != 0 && a & !b != 0 && b & !a != 0 && (a | b) != full;
        let proper = |m: u64| m.count_ones() >= 2 && (full & !m).count_ones() >= 2;
        let cands: Vec<u64> = tight
            .iter()
            .copied()
            .filter(|&m| proper(m) && !tight.iter().any(|&t| cross(m, t)))
            .filter(|&m| {
                let s = expand(m);
                !(s.contains(&pu) && s.contains(&pv))
            })
            .collect();
        let minimal: Vec<u64> =
            cands.iter().copied().filter(|&m| !cands.iter().any(|&d| d != m && d & m == d)).collect();
        let Some(&pick) = minimal.first() else { break };
        let s = expand(pick);
        found.push(s.clone());
        let mut rest: Vec<BTreeSet<usize>> = (0..k).filter(|i| pick >> i & 1 == 0).map(|i| nodes[i].clone()).collect();
        rest.push(s);
        nodes = rest;
    }
    found
}

fn hierarchy_sets(h: &CutHierarchy) -> BTreeSet<BTreeSet<usize>> {
    h.internal_nodes().map(|n| n.members.members().collect()).collect()
}

fn exhaustive_cut_sides(g: &SupportGraph) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << (g.n - 1)) {
        let side = VertexSet::from_mask(g.n, mask << 1);
        if g.edges.iter().filter(|e| side.contains(e.u) != side.contains(e.v)).count() == 4 {
            out.push(side);
        }
    }
    out.sort();
    out
}

#[test]
fn doubled_c5_is_a_root_cycle() {
    let g = support(&doubled_cycle(5, CostModel::Unit).unwrap());
    let h = build_hierarchy(&g).unwrap();
    assert_eq!(h.internal_nodes().count(), 0);
    assert_eq!(h.node(h.root).children, vec![0, 1, 2, 3, 4]);
    for e in 0..g.num_edges() {
        let r = h.role(e);
        assert_eq!(r.class, EdgeClass::Bottom);
        assert_eq!(r.companion, g.parallel[e]);
    }
    // edge (0,1): last cuts are the singletons on either side
    let lc = h.role(0).last_cuts.clone();
    let sides: BTreeSet<Vec<usize>> = lc.iter().map(|t| t.members.to_vec()).collect();
    assert_eq!(sides, BTreeSet::from([vec![1, 2, 3, 4], vec![1]]));
    assert!(h.last_cuts(g.e_plus).is_err());
    assert!(h.check_facts(&g).is_empty(), "{:?}", h.check_facts(&g));
}

#[test]
fn doubled_c5_cuts_containing_an_edge() {
    let g = support(&doubled_cycle(5, CostModel::Unit).unwrap());
    let h = build_hierarchy(&g).unwrap();
    let e = 2; // a copy of (1, 2)
    let got: Vec<Vec<usize>> = h.min_cuts_containing(e).iter().map(|t| t.members.to_vec()).collect();
    let oracle: Vec<Vec<usize>> =
        exhaustive_cut_sides(&g).into_iter().filter(|s| s.contains(1) != s.contains(2)).map(|s| s.to_vec()).collect();
    assert_eq!(got, oracle);
    assert_eq!(got.len(), 4);
}

#[test]
fn matches_brute_force_loop() {
    let instances = vec![
        doubled_cycle(6, CostModel::Unit).unwrap(),
        k4_chain(2, CostModel::Unit).unwrap(),
        k4_chain(3, CostModel::Unit).unwrap(),
        nested_cycle(1, CostModel::Unit).unwrap(),
        nested_cycle(2, CostModel::Unit).unwrap(),
    ];
    for sol in instances {
        let g = support(&sol);
        let h = build_hierarchy(&g).unwrap();
        let oracle: BTreeSet<BTreeSet<usize>> = oracle_critical_sets(&g).into_iter().collect();
        assert_eq!(hierarchy_sets(&h), oracle, "n = {}", g.n);
        let sides: Vec<VertexSet> = h.min_cuts.iter().map(|c| c.members.clone()).collect();
        assert_eq!(sides, exhaustive_cut_sides(&g));
        assert!(h.check_facts(&g).is_empty(), "{:?}", h.check_facts(&g));
        for e in 0..g.num_edges() {
            let by_filter: Vec<&TightSet> = h.min_cuts.iter().filter(|c| c.boundary.contains(&e)).collect();
            assert_eq!(h.min_cuts_containing(e), by_filter);
        }
    }
}

#[test]
fn two_k4_blocks() {
    let g = support(&k4_chain(2, CostModel::Unit).unwrap());
    let h = build_hierarchy(&g).unwrap();
    let block_b: BTreeSet<usize> = (4..8).collect();
    let node = h
        .internal_nodes()
        .find(|n| n.members.members().collect::<BTreeSet<_>>() == block_b)
        .expect("block without the unit edge is critical");
    assert_eq!(node.kind, NodeKind::DegreeCut);
    // everything except the two halves of the split vertex is tight, so the block sits one level down
    let parent = h.node(node.parent.unwrap());
    assert_eq!(parent.members.to_vec(), (1..8).collect::<Vec<_>>());
    assert_eq!(parent.parent, Some(h.root));
    let higher: Vec<usize> = node.boundary.iter().copied().filter(|&e| h.goes_higher(e, node.id)).collect();
    assert_eq!(higher.len(), 1);
    assert!(h.is_bottom(higher[0]));
    for &e in node.boundary.iter().filter(|e| !higher.contains(e)) {
        assert!(h.is_top(e));
        let lc = h.last_cuts(e).unwrap();
        assert!(lc.iter().any(|t| t.members.to_vec() == vec![4, 5, 6, 7]));
    }
}

#[test]
fn nested_cycle_has_cycle_under_cycle() {
    let g = support(&nested_cycle(2, CostModel::Unit).unwrap());
    let h = build_hierarchy(&g).unwrap();
    let nested = h
        .internal_nodes()
        .any(|n| n.kind == NodeKind::CycleCut && n.parent.map(|p| h.node(p).kind) == Some(NodeKind::CycleCut));
    assert!(nested);
}

#[test]
fn two_cycle_gadgets_structure() {
    let g = support(&two_cycle_gadgets(CostModel::Unit));
    let h = build_hierarchy(&g).unwrap();
    let cycles: Vec<&HierarchyNode> = h.internal_nodes().filter(|n| n.kind == NodeKind::CycleCut).collect();
    let degrees = h.internal_nodes().filter(|n| n.kind == NodeKind::DegreeCut).count();
    assert_eq!(cycles.len(), 2);
    assert_eq!(degrees, 5);
    assert!(cycles.iter().all(|c| c.parent == Some(h.root)));
    assert!(h.node(h.root).children.len() >= 3);
    let three = cycles.iter().find(|c| c.children.len() == 3).unwrap();
    let [p, q] = [three.partners[0], three.partners[1]];
    assert!(p.iter().all(|e| !q.contains(e)));
    for pair in [p, q] {
        for e in pair {
            assert!(h.role(e).partners.contains(&(three.id, if e == pair[0] { pair[1] } else { pair[0] })));
        }
    }
    assert!(h.check_facts(&g).is_empty(), "{:?}", h.check_facts(&g));
}

#[test]
fn dot_and_json_render() {
    let g = support(&nested_cycle(2, CostModel::Unit).unwrap());
    let h = build_hierarchy(&g).unwrap();
    assert!(h.to_dot().starts_with("digraph"));
    let v: serde_json::Value = serde_json::from_str(&h.to_json()).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), h.nodes.len());
}

#[test]
fn library_hierarchies_satisfy_facts() {
    for (name, sol) in crate::generate::library() {
        let g = support(&sol);
        let h = build_hierarchy(&g).unwrap();
        let facts = h.check_facts(&g);
        assert!(facts.is_empty(), "{name}: {facts:?}");
        if g.n <= EXHAUSTIVE_LIMIT {
            let sides: Vec<VertexSet> = h.min_cuts.iter().map(|c| c.members.clone()).collect();
            assert_eq!(sides, exhaustive_cut_sides(&g), "{name}");
        }
    }
}
