use serde::Serialize;

use super::solution::{validate, EdgeRecord, HalfIntegralSolution};
use crate::error::{Error, Result};

/// Record of the vertex split performed when the input has no x=1 edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitRecord {
    /// The vertex that was split; it keeps its id and the first pair of edges.
    pub vertex: usize,
    /// Id of the new vertex carrying the second pair of edges.
    pub new_vertex: usize,
    /// Edge indices (into the split solution) kept at `vertex`.
    pub kept: [usize; 2],
    /// Edge indices moved to `new_vertex`.
    pub moved: [usize; 2],
    /// Which of the three pairings was accepted (0, 1 or 2).
    pub pairing: usize,
}

#[derive(Clone, Debug)]
pub struct UnitEdgeSolution {
    pub solution: HalfIntegralSolution,
    /// Index into `solution.edges` of the designated x=1 edge.
    pub unit_edge: usize,
    pub split: Option<SplitRecord>,
}

impl UnitEdgeSolution {
    /// Vertex count of the original input.
    pub fn original_n(&self) -> usize {
        self.solution.n - usize::from(self.split.is_some())
    }

    /// Maps a vertex of the split solution back to the input's ids.
    pub fn original_vertex(&self, v: usize) -> usize {
        match &self.split {
            Some(s) if v == s.new_vertex => s.vertex,
            _ => v,
        }
    }
}

const PAIRINGS: [([usize; 2], [usize; 2]); 3] = [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];

/// Designates an x=1 edge, splitting the lowest-id vertex if there is none.
pub fn ensure_unit_edge(sol: &HalfIntegralSolution) -> Result<UnitEdgeSolution> {
    if let Some(i) = sol.edges.iter().position(|e| e.x == 1.0) {
        return Ok(UnitEdgeSolution { solution: sol.clone(), unit_edge: i, split: None });
    }
    let v = 0;
    let incident = sol.incident(v);
    if incident.len() != 4 {
        return Err(Error::Structural(format!("vertex {v} has {} incident half-edges, expected 4", incident.len())));
    }
    let new_vertex = sol.n;
    for (pairing, (kept, moved)) in PAIRINGS.iter().enumerate() {
        let mut edges = sol.edges.clone();
        for &k in moved {
            let e = &mut edges[incident[k]];
            if e.u == v {
                e.u = new_vertex;
            } else {
                e.v = new_vertex;
            }
        }
        edges.push(EdgeRecord { u: v, v: new_vertex, x: 1.0, cost: 0.0 });
        let matrix = sol.matrix.as_ref().map(|m| {
            let mut ext: Vec<Vec<f64>> = m
                .iter()
                .map(|row| {
                    let mut r = row.clone();
                    r.push(row[v]);
                    r
                })
                .collect();
            let mut last = m[v].clone();
            last.push(0.0);
            last[v] = 0.0;
            ext[v][new_vertex] = 0.0;
            ext.push(last);
            ext
        });
        let candidate = HalfIntegralSolution { n: sol.n + 1, edges, matrix };
        if validate(&candidate).min_cut == 4 {
            let unit_edge = candidate.edges.len() - 1;
            return Ok(UnitEdgeSolution {
                solution: candidate,
                unit_edge,
                split: Some(SplitRecord {
                    vertex: v,
                    new_vertex,
                    kept: [incident[kept[0]], incident[kept[1]]],
                    moved: [incident[moved[0]], incident[moved[1]]],
                    pairing,
                }),
            });
        }
    }
    Err(Error::Structural(format!("no pairing at vertex {v} keeps the support graph 4-edge-connected")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HalfEdge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub cost: f64,
    /// Index of the solution edge this half-edge came from.
    pub origin: usize,
}

impl HalfEdge {
    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

/// The 4-regular support multigraph. Each x=1 edge becomes two parallel half-edges.
#[derive(Clone, Debug, Serialize)]
pub struct SupportGraph {
    pub n: usize,
    pub edges: Vec<HalfEdge>,
    #[serde(skip)]
    pub incidence: Vec<Vec<usize>>,
    /// The forced copy of the designated unit edge.
    pub e_plus: usize,
    /// The other parallel copy, never in a sampled tree.
    pub e_plus_twin: usize,
    pub split: Option<SplitRecord>,
    /// For each half-edge, its parallel copy if the origin edge has x=1.
    #[serde(skip)]
    pub parallel: Vec<Option<usize>>,
    /// c(x) of the solution.
    pub cost_x: f64,
}

/// Builds the support multigraph; ids of half-edges follow the solution's edge order.
pub fn build_support(unit: &UnitEdgeSolution) -> SupportGraph {
    let sol = &unit.solution;
    let mut edges = Vec::with_capacity(2 * sol.n);
    let mut parallel = Vec::with_capacity(2 * sol.n);
    let mut first_copy = vec![usize::MAX; sol.edges.len()];
    for (origin, e) in sol.edges.iter().enumerate() {
        let copies = HalfIntegralSolution::multiplicity(e.x);
        first_copy[origin] = edges.len();
        for k in 0..copies {
            let id = edges.len();
            edges.push(HalfEdge { id, u: e.u, v: e.v, cost: e.cost, origin });
            parallel.push(if copies == 2 { Some(if k == 0 { id + 1 } else { id - 1 }) } else { None });
        }
    }
    let mut incidence = vec![Vec::with_capacity(4); sol.n];
    for e in &edges {
        incidence[e.u].push(e.id);
        incidence[e.v].push(e.id);
    }
    let e_plus = first_copy[unit.unit_edge];
    SupportGraph {
        n: sol.n,
        edges,
        incidence,
        e_plus,
        e_plus_twin: e_plus + 1,
        split: unit.split.clone(),
        parallel,
        cost_x: sol.cost(),
    }
}

impl SupportGraph {
    /// Convenience: designate a unit edge and build the support graph.
    pub fn from_solution(sol: &HalfIntegralSolution) -> Result<(UnitEdgeSolution, SupportGraph)> {
        let unit = ensure_unit_edge(sol)?;
        let g = build_support(&unit);
        Ok((unit, g))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|e| (e.u, e.v))
    }

    /// True for the designated edge and its parallel copy.
    pub fn is_unit_pair(&self, e: usize) -> bool {
        e == self.e_plus || e == self.e_plus_twin
    }

    /// Half-edges with exactly one endpoint in the set given by the membership predicate.
    pub fn boundary<F: Fn(usize) -> bool>(&self, inside: F) -> Vec<usize> {
        self.edges.iter().filter(|e| inside(e.u) != inside(e.v)).map(|e| e.id).collect()
    }

    /// Half-edges with both endpoints inside.
    pub fn internal<F: Fn(usize) -> bool>(&self, inside: F) -> Vec<usize> {
        self.edges.iter().filter(|e| inside(e.u) && inside(e.v)).map(|e| e.id).collect()
    }

    /// Σ cost/2 over half-edges, equal to c(x).
    pub fn half_cost(&self) -> f64 {
        self.edges.iter().map(|e| e.cost / 2.0).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_connected;

    fn k5_half() -> HalfIntegralSolution {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push(EdgeRecord { u, v, x: 0.5, cost: (u + v) as f64 });
            }
        }
        HalfIntegralSolution { n: 5, edges, matrix: None }
    }

    /// Edge connectivity ≥ 4 by removing every triple of half-edges.
    fn four_connected_by_brute_force(n: usize, pairs: &[(usize, usize)]) -> bool {
        let m = pairs.len();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let rest = pairs.iter().enumerate().filter(|&(i, _)| i != a && i != b && i != c).map(|(_, &p)| p);
                    if !is_connected(n, rest) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn unit_edge_is_designated_without_change() {
        let sol = HalfIntegralSolution {
            n: 5,
            edges: (0..5).map(|i| EdgeRecord { u: i, v: (i + 1) % 5, x: 1.0, cost: 1.0 }).collect(),
            matrix: None,
        };
        let unit = ensure_unit_edge(&sol).unwrap();
        assert!(unit.split.is_none());
        assert_eq!(unit.solution, sol);
        assert_eq!(unit.unit_edge, 0);
    }

    #[test]
    fn split_of_all_half_instance() {
        let sol = k5_half();
        let unit = ensure_unit_edge(&sol).unwrap();
        let s = unit.split.clone().unwrap();
        assert_eq!(unit.solution.n, 6);
        assert_eq!(s.new_vertex, 5);
        let e = &unit.solution.edges[unit.unit_edge];
        assert_eq!((e.u, e.v, e.x, e.cost), (0, 5, 1.0, 0.0));
        assert!(validate(&unit.solution).is_valid());
        assert_eq!(unit.solution.cost(), sol.cost());
        let g = build_support(&unit);
        let pairs: Vec<_> = g.pairs().collect();
        assert!(four_connected_by_brute_force(g.n, &pairs));
    }

    #[test]
    fn support_graph_shape() {
        let sol = HalfIntegralSolution {
            n: 5,
            edges: (0..5).map(|i| EdgeRecord { u: i, v: (i + 1) % 5, x: 1.0, cost: 5.0 }).collect(),
            matrix: None,
        };
        let (_, g) = SupportGraph::from_solution(&sol).unwrap();
        assert_eq!(g.num_edges(), 10);
        assert!(g.incidence.iter().all(|inc| inc.len() == 4));
        assert_eq!(g.edges[g.e_plus].ends(), g.edges[g.e_plus_twin].ends());
        assert!(g.edges.iter().all(|e| e.cost == 5.0));
        assert_eq!(g.half_cost(), sol.cost());
    }

    #[test]
    fn split_extends_matrix() {
        let mut sol = k5_half();
        let m: Vec<Vec<f64>> =
            (0..5).map(|i| (0..5).map(|j| if i == j { 0.0 } else { (i + j) as f64 }).collect()).collect();
        sol.matrix = Some(m);
        let unit = ensure_unit_edge(&sol).unwrap();
        let ext = unit.solution.matrix.as_ref().unwrap();
        assert_eq!(ext.len(), 6);
        assert_eq!(ext[0][5], 0.0);
        assert_eq!(ext[5][3], ext[0][3]);
        assert_eq!(ext[3][5], ext[3][0]);
    }

    #[test]
    fn idempotent() {
        let unit = ensure_unit_edge(&k5_half()).unwrap();
        let again = ensure_unit_edge(&unit.solution).unwrap();
        assert!(again.split.is_none());
        assert_eq!(again.solution, unit.solution);
        assert_eq!(again.unit_edge, unit.unit_edge);
    }
}
