//! Instance generators: doubled cycles, closed chains of K4 blocks, nested cycle gadgets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{EdgeRecord, HalfIntegralSolution};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CostModel {
    Unit,
    /// Random points in the unit square; Euclidean distances rounded to 1e-9, full matrix attached.
    Euclidean {
        seed: u64,
    },
}

/// A gadget with four stub vertices, each still needing one ½ edge.
#[derive(Clone, Copy, Debug)]
struct Ports {
    left: [usize; 2],
    right: [usize; 2],
}

#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn half(&mut self, u: usize, v: usize) {
        self.edges.push((u, v, 0.5));
    }

    fn k4(&mut self) -> Ports {
        let v: Vec<usize> = (0..4).map(|_| self.vertex()).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                self.half(v[i], v[j]);
            }
        }
        Ports { left: [v[0], v[1]], right: [v[2], v[3]] }
    }

    fn link(&mut self, a: Ports, b: Ports) {
        self.half(a.right[0], b.left[0]);
        self.half(a.right[1], b.left[1]);
    }

    /// Chains the parts into a gadget whose contracted view is a doubled cycle.
    /// Each side of the result takes one stub from each end so it cannot merge with an outer cycle.
    fn cycle(&mut self, parts: &[Ports]) -> Ports {
        for w in parts.windows(2) {
            self.link(w[0], w[1]);
        }
        let (first, last) = (parts[0], parts[parts.len() - 1]);
        Ports { left: [first.left[0], last.right[0]], right: [first.left[1], last.right[1]] }
    }

    /// Closes the parts into a ring through an x=1 edge u-v.
    fn close_with_unit(&mut self, parts: &[Ports]) {
        for w in parts.windows(2) {
            self.link(w[0], w[1]);
        }
        let u = self.vertex();
        let v = self.vertex();
        let (first, last) = (parts[0], parts[parts.len() - 1]);
        self.half(first.left[0], u);
        self.half(first.left[1], u);
        self.half(last.right[0], v);
        self.half(last.right[1], v);
        self.edges.push((u, v, 1.0));
    }

    fn finish(self, costs: CostModel) -> HalfIntegralSolution {
        let n = self.n;
        let (matrix, cost): (Option<Vec<Vec<f64>>>, Box<dyn Fn(usize, usize) -> f64>) = match costs {
            CostModel::Unit => (None, Box::new(|_, _| 1.0)),
            CostModel::Euclidean { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
                let m: Vec<Vec<f64>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let d = ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt();
                                (d * 1e9).round() / 1e9
                            })
                            .collect()
                    })
                    .collect();
                let mc = m.clone();
                (Some(m), Box::new(move |u, v| mc[u][v]))
            }
        };
        let edges = self.edges.iter().map(|&(u, v, x)| EdgeRecord { u, v, x, cost: cost(u, v) }).collect();
        HalfIntegralSolution { n, edges, matrix }
    }
}

/// Cycle on `n` vertices with every consecutive pair at x=1.
pub fn doubled_cycle(n: usize, costs: CostModel) -> Result<HalfIntegralSolution> {
    if n < 3 {
        return Err(Error::Parameters(format!("doubled cycle needs n >= 3, got {n}")));
    }
    let b = Builder { n, edges: (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect() };
    Ok(b.finish(costs))
}

/// `blocks` K4 blocks with all x=½ closed into a ring by pairs of ½ edges; has no x=1 edge.
pub fn k4_chain(blocks: usize, costs: CostModel) -> Result<HalfIntegralSolution> {
    if blocks < 2 {
        return Err(Error::Parameters(format!("k4-chain needs at least 2 blocks, got {blocks}")));
    }
    let mut b = Builder::default();
    let parts: Vec<Ports> = (0..blocks).map(|_| b.k4()).collect();
    for i in 0..blocks {
        b.link(parts[i], parts[(i + 1) % blocks]);
    }
    Ok(b.finish(costs))
}

/// Cycle gadgets nested `depth` times: level 0 is a K4 block and level i is a
/// two-part cycle of level i-1 and a fresh K4 block; the top level is closed through an x=1 edge.
pub fn nested_cycle(depth: usize, costs: CostModel) -> Result<HalfIntegralSolution> {
    if !(1..=6).contains(&depth) {
        return Err(Error::Parameters(format!("nested-cycle depth must be in 1..=6, got {depth}")));
    }
    let mut b = Builder::default();
    let mut g = b.k4();
    for _ in 0..depth {
        let block = b.k4();
        g = b.cycle(&[g, block]);
    }
    b.close_with_unit(&[g]);
    Ok(b.finish(costs))
}

/// Five K4 blocks: a three-block cycle gadget and a two-block cycle gadget, closed through an x=1 edge.
pub fn two_cycle_gadgets(costs: CostModel) -> HalfIntegralSolution {
    let mut b = Builder::default();
    let blocks: Vec<Ports> = (0..5).map(|_| b.k4()).collect();
    let f = b.cycle(&blocks[0..3]);
    let g = b.cycle(&blocks[3..5]);
    b.close_with_unit(&[f, g]);
    b.finish(costs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    DoubledCycle,
    K4Chain,
    NestedCycle,
}

impl std::str::FromStr for InstanceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "doubled-cycle" => Ok(InstanceKind::DoubledCycle),
            "k4-chain" => Ok(InstanceKind::K4Chain),
            "nested-cycle" => Ok(InstanceKind::NestedCycle),
            other => Err(Error::Parameters(format!("unknown instance kind `{other}`"))),
        }
    }
}

pub fn generate(kind: InstanceKind, size: usize, costs: CostModel) -> Result<HalfIntegralSolution> {
    match kind {
        InstanceKind::DoubledCycle => doubled_cycle(size, costs),
        InstanceKind::K4Chain => k4_chain(size, costs),
        InstanceKind::NestedCycle => nested_cycle(size, costs),
    }
}

/// Seed used for the Euclidean costs of the standard library.
pub const LIBRARY_SEED: u64 = 20_231_017;

/// The standard test library: doubled cycles 3..=12, K4 chains 2..=5, nested cycles depth 2..=3.
pub fn library() -> Vec<(String, HalfIntegralSolution)> {
    let mut out = Vec::new();
    for n in 3..=12 {
        out.push((format!("doubled-cycle-{n}"), doubled_cycle(n, CostModel::Unit).unwrap()));
    }
    for blocks in 2..=5 {
        let costs = CostModel::Euclidean { seed: LIBRARY_SEED + blocks as u64 };
        out.push((format!("k4-chain-{blocks}"), k4_chain(blocks, costs).unwrap()));
    }
    for depth in 2..=3 {
        let costs = CostModel::Euclidean { seed: LIBRARY_SEED + 100 + depth as u64 };
        out.push((format!("nested-cycle-{depth}"), nested_cycle(depth, costs).unwrap()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate;

    #[test]
    fn library_is_valid() {
        for (name, sol) in library() {
            let r = validate(&sol);
            assert!(r.is_valid(), "{name}: {:?}", r.violations);
        }
        assert!(validate(&two_cycle_gadgets(CostModel::Euclidean { seed: 3 })).is_valid());
    }

    #[test]
    fn kinds_parse() {
        assert_eq!("k4-chain".parse::<InstanceKind>().unwrap(), InstanceKind::K4Chain);
        assert!("hexagon".parse::<InstanceKind>().is_err());
        assert!(doubled_cycle(2, CostModel::Unit).is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!(k4_chain(2, CostModel::Unit).unwrap().n, 8);
        assert_eq!(nested_cycle(2, CostModel::Unit).unwrap().n, 14);
        assert_eq!(two_cycle_gadgets(CostModel::Unit).n, 22);
    }
}
