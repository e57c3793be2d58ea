use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::METRIC_TOLERANCE;
use crate::error::{Error, Result};
use crate::graph::stoer_wagner;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub x: f64,
    pub cost: f64,
}

/// A fractional solution of the subtour LP with every value in {½, 1}; zero edges are omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfIntegralSolution {
    pub n: usize,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonHalfIntegral { edge: usize, x: f64 },
    Degree { vertex: usize, degree: f64 },
    MinCut { value: usize, side: Vec<usize> },
    NegativeCost { edge: usize, cost: f64 },
    Asymmetric { i: usize, j: usize },
    NonzeroDiagonal { i: usize, value: f64 },
    CostMismatch { edge: usize, cost: f64, matrix: f64 },
    Triangle { i: usize, j: usize, k: usize, excess: f64 },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Global minimum cut of the support multigraph, counted in half-edges.
    pub min_cut: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_TRIANGLE_REPORTS: usize = 100;

impl HalfIntegralSolution {
    /// Parses the JSON instance format, rejecting malformed input.
    pub fn from_json(text: &str) -> Result<Self> {
        let sol: HalfIntegralSolution = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        sol.check_well_formed()?;
        Ok(sol)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Structural checks that make the input unusable rather than merely invalid.
    pub fn check_well_formed(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Parse(format!("need at least 2 vertices, got {}", self.n)));
        }
        let mut seen = HashSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= self.n || e.v >= self.n {
                return Err(Error::Parse(format!("edge {i}: vertex id out of range 0..{}", self.n)));
            }
            if e.u == e.v {
                return Err(Error::Parse(format!("edge {i}: self-loop at {}", e.u)));
            }
            if !e.x.is_finite() || !e.cost.is_finite() {
                return Err(Error::Parse(format!("edge {i}: non-finite value")));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::Parse(format!("edge {i}: duplicate pair ({}, {})", e.u, e.v)));
            }
        }
        if let Some(m) = &self.matrix {
            if m.len() != self.n || m.iter().any(|row| row.len() != self.n) {
                return Err(Error::Parse(format!("cost matrix must be {0}x{0}", self.n)));
            }
            if m.iter().flatten().any(|c| !c.is_finite()) {
                return Err(Error::Parse("cost matrix has non-finite entries".into()));
            }
        }
        Ok(())
    }

    /// c(x) = Σ x_e c_e.
    pub fn cost(&self) -> f64 {
        self.edges.iter().map(|e| e.x * e.cost).sum()
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.edges.iter().filter(|e| e.u == v || e.v == v).map(|e| e.x).sum()
    }

    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].u == v || self.edges[i].v == v).collect()
    }

    /// Number of parallel half-edges an edge contributes to the support graph.
    pub(crate) fn multiplicity(x: f64) -> usize {
        if x == 1.0 {
            2
        } else {
            ((2.0 * x).round() as usize).max(1)
        }
    }

    pub(crate) fn support_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().flat_map(|e| std::iter::repeat_n((e.u, e.v), Self::multiplicity(e.x))).collect()
    }
}

/// Checks the subtour-LP invariants on the support graph rather than by solving an LP.
pub fn validate(sol: &HalfIntegralSolution) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, e) in sol.edges.iter().enumerate() {
        if e.x != 0.5 && e.x != 1.0 {
            violations.push(Violation::NonHalfIntegral { edge: i, x: e.x });
        }
        if e.cost < 0.0 {
            violations.push(Violation::NegativeCost { edge: i, cost: e.cost });
        }
    }
    let mut degree = vec![0.0; sol.n];
    for e in &sol.edges {
        degree[e.u] += e.x;
        degree[e.v] += e.x;
    }
    for (v, &d) in degree.iter().enumerate() {
        if d != 2.0 {
            violations.push(Violation::Degree { vertex: v, degree: d });
        }
    }
    let (min_cut, side) = stoer_wagner(sol.n, sol.support_pairs());
    if min_cut != 4 {
        violations.push(Violation::MinCut { value: min_cut, side });
    }
    if let Some(m) = &sol.matrix {
        let n = sol.n;
        for i in 0..n {
            if m[i][i] != 0.0 {
                violations.push(Violation::NonzeroDiagonal { i, value: m[i][i] });
            }
            for j in i + 1..n {
                if m[i][j] != m[j][i] {
                    violations.push(Violation::Asymmetric { i, j });
                }
                if m[i][j] < 0.0 {
                    violations.push(Violation::NegativeCost { edge: usize::MAX, cost: m[i][j] });
                }
            }
        }
        for (idx, e) in sol.edges.iter().enumerate() {
            if (m[e.u][e.v] - e.cost).abs() > METRIC_TOLERANCE * (1.0 + e.cost.abs()) {
                violations.push(Violation::CostMismatch { edge: idx, cost: e.cost, matrix: m[e.u][e.v] });
            }
        }
        let mut reported = 0;
        'outer: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let excess = m[i][k] - m[i][j] - m[j][k];
                    if excess > METRIC_TOLERANCE * (1.0 + m[i][k].abs()) {
                        violations.push(Violation::Triangle { i, j, k, excess });
                        reported += 1;
                        if reported >= MAX_TRIANGLE_REPORTS {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    ValidationReport { violations, min_cut }
}
