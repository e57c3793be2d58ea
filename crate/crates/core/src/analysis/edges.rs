//! Per-edge probability of being even at last, good-edge classification and reduction classes.

use std::collections::BTreeMap;

use serde::Serialize;

use super::parity::{prob, wilson_interval, ParityModel};
use crate::cuts::{CutHierarchy, TightSet};
use crate::error::{Error, Result};
use crate::instance::SupportGraph;
use crate::vset::VertexSet;

/// Lower bound on the even-at-last probability that makes an edge good.
pub const GOOD_THRESHOLD: f64 = 1.0 / 27.0;

/// Normal quantile of the two-sided 99% interval used for sampled classification.
const Z99: f64 = 2.5758293035489004;

/// Min cuts with stable indices and per-edge lookup.
#[derive(Clone, Debug)]
pub struct CutIndex {
    pub cuts: Vec<TightSet>,
    by_side: BTreeMap<VertexSet, usize>,
    /// Indices of the cuts whose boundary holds each half-edge.
    pub containing: Vec<Vec<usize>>,
}

impl CutIndex {
    pub fn new(g: &SupportGraph, h: &CutHierarchy) -> Self {
        let cuts = h.min_cuts.clone();
        let by_side = cuts.iter().enumerate().map(|(i, c)| (c.members.clone(), i)).collect();
        let mut containing = vec![Vec::new(); g.num_edges()];
        for (i, c) in cuts.iter().enumerate() {
            for &e in &c.boundary {
                containing[e].push(i);
            }
        }
        CutIndex { cuts, by_side, containing }
    }

    pub fn find(&self, side: &TightSet) -> Option<usize> {
        self.by_side.get(&side.members.canonical()).copied()
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn boundary(&self, c: usize) -> &[usize] {
        &self.cuts[c].boundary
    }

    /// Odd flag per cut for a tree given by its membership indicator.
    pub fn parities(&self, in_tree: &[bool]) -> Vec<bool> {
        self.cuts.iter().map(|c| c.boundary.iter().filter(|&&e| in_tree[e]).count() % 2 == 1).collect()
    }
}

/// How much a good edge is reduced when it is even at last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionClass {
    Bottom,
    /// Top edge whose two endpoint cuts each hold exactly two good non-higher top edges.
    TopPair,
    TopOther,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeInfo {
    pub edge: usize,
    /// Pr[both last cuts even].
    pub p_even: f64,
    /// 99% Wilson interval when sampled.
    pub interval: Option<(f64, f64)>,
    pub good: bool,
    pub bottom: bool,
    pub class: Option<ReductionClass>,
    /// Indices into the cut index.
    pub last_cuts: [usize; 2],
    pub companion: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeAnalysis {
    /// `None` for the two copies of the designated unit edge.
    pub edges: Vec<Option<EdgeInfo>>,
    /// Good edges having each cut as a last cut.
    pub good_on_cut: Vec<Vec<usize>>,
    pub exact: bool,
    #[serde(skip)]
    pub cuts: CutIndex,
}

impl EdgeAnalysis {
    pub fn info(&self, e: usize) -> Option<&EdgeInfo> {
        self.edges[e].as_ref()
    }

    pub fn is_good(&self, e: usize) -> bool {
        self.info(e).is_some_and(|i| i.good)
    }

    pub fn good_edges(&self) -> impl Iterator<Item = &EdgeInfo> {
        self.edges.iter().flatten().filter(|i| i.good)
    }

    /// Shared Bernoulli owner: the smaller id of a good companion pair.
    pub fn bernoulli_group(&self, e: usize) -> usize {
        match self.info(e).and_then(|i| i.companion) {
            Some(f) if self.is_good(f) => e.min(f),
            _ => e,
        }
    }
}

/// Computes Pr[even at last] per edge and classifies good edges and their reduction class.
pub fn estimate_p(g: &SupportGraph, h: &CutHierarchy, model: &ParityModel) -> Result<EdgeAnalysis> {
    let cuts = CutIndex::new(g, h);
    let m = g.num_edges();
    let mut edges: Vec<Option<EdgeInfo>> = vec![None; m];
    for e in (0..m).filter(|&e| e != g.e_plus && e != g.e_plus_twin) {
        let role = h.role(e);
        let mut last = [0usize; 2];
        for (slot, side) in last.iter_mut().zip(&role.last_cuts) {
            *slot =
                cuts.find(side).ok_or_else(|| Error::Hierarchy(format!("last cut of edge {e} is not a min cut")))?;
        }
        let joint = model.joint(&[cuts.boundary(last[0]), cuts.boundary(last[1])]);
        let p_even = prob(&joint, |k| k == 0);
        let (interval, good) = match model.trials() {
            None => (None, p_even >= GOOD_THRESHOLD - 1e-12),
            Some(n) => {
                let ci = wilson_interval(p_even * n as f64, n as f64, Z99);
                (Some(ci), ci.0 > GOOD_THRESHOLD)
            }
        };
        edges[e] = Some(EdgeInfo {
            edge: e,
            p_even,
            interval,
            good,
            bottom: h.is_bottom(e),
            class: None,
            last_cuts: last,
            companion: role.companion,
        });
    }
    // reduction classes depend only on the hierarchy and the good set
    let good = |f: usize| edges[f].as_ref().is_some_and(|i| i.good);
    let mut classes = vec![None; m];
    for info in edges.iter().flatten().filter(|i| i.good) {
        let e = info.edge;
        classes[e] = Some(if info.bottom {
            ReductionClass::Bottom
        } else {
            let role = h.role(e);
            let count = |side: usize| {
                h.node(side).boundary.iter().filter(|&&f| good(f) && h.is_top(f) && !h.goes_higher(f, side)).count()
            };
            if count(role.side_u) == 2 && count(role.side_v) == 2 {
                ReductionClass::TopPair
            } else {
                ReductionClass::TopOther
            }
        });
    }
    let mut good_on_cut = vec![Vec::new(); cuts.len()];
    for (e, info) in edges.iter_mut().enumerate() {
        if let Some(info) = info {
            info.class = classes[e];
            if info.good {
                good_on_cut[info.last_cuts[0]].push(e);
                if info.last_cuts[1] != info.last_cuts[0] {
                    good_on_cut[info.last_cuts[1]].push(e);
                }
            }
        }
    }
    Ok(EdgeAnalysis { edges, good_on_cut, exact: model.is_exact(), cuts })
}
