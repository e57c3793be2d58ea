use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cuts::build_hierarchy;
use crate::generate::{doubled_cycle, library, CostModel};
use crate::instance::metric_closure;
use crate::pipeline::PreparedInstance;
use crate::rng::{stream, Purpose};

/// Minimum over all perfect pairings, by recursion on the first unpaired vertex.
fn brute_pairing(d: &dyn Fn(usize, usize) -> f64, verts: &[usize]) -> f64 {
    if verts.is_empty() {
        return 0.0;
    }
    let a = verts[0];
    let mut best = f64::INFINITY;
    for i in 1..verts.len() {
        let rest: Vec<usize> = verts[1..].iter().enumerate().filter(|&(j, _)| j + 1 != i).map(|(_, &v)| v).collect();
        best = best.min(d(a, verts[i]) + brute_pairing(d, &rest));
    }
    best
}

fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> DistanceOracle {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let dist = (0..n)
        .map(|i| (0..n).map(|j| ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt()).collect())
        .collect();
    DistanceOracle::from_matrix(dist)
}

#[test]
fn trivial_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = random_metric(6, &mut rng);
    let j = min_ojoin(&m, &[]).unwrap();
    assert_eq!(j.cost, 0.0);
    assert!(j.pairs.is_empty());
    let j = min_ojoin(&m, &[4, 1]).unwrap();
    assert_eq!(j.pairs, vec![[1, 4]]);
    assert_eq!(j.cost, m.d(1, 4));
    assert!(matches!(min_ojoin(&m, &[0, 1, 2]), Err(Error::OddJoinSet(3))));
}

#[test]
fn matches_brute_force_on_random_metrics() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = 2 * rng.gen_range(1..=5);
        let m = random_metric(n + 3, &mut rng);
        let mut verts: Vec<usize> = (0..n + 3).collect();
        verts.shuffle(&mut rng);
        verts.truncate(n);
        let j = min_ojoin(&m, &verts).unwrap();
        let best = brute_pairing(&|a, b| m.d(a, b), &verts);
        assert!((j.cost - best).abs() <= 1e-9 * (1.0 + best), "{} vs {best}", j.cost);
        let mut covered: Vec<usize> = j.pairs.iter().flatten().copied().collect();
        covered.sort_unstable();
        let mut want = verts.clone();
        want.sort_unstable();
        assert_eq!(covered, want);
    }
}

#[test]
fn invariant_under_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let n = 12;
        let m = random_metric(n, &mut rng);
        let odd: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let odd = if odd.len() % 2 == 1 { odd[1..].to_vec() } else { odd };
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let permuted =
            DistanceOracle::from_matrix((0..n).map(|i| (0..n).map(|j| m.d(inv[i], inv[j])).collect()).collect());
        let a = min_ojoin(&m, &odd).unwrap();
        let b = min_ojoin(&permuted, &odd.iter().map(|&v| perm[v]).collect::<Vec<_>>()).unwrap();
        assert!((a.cost - b.cost).abs() < 1e-9);
    }
}

#[test]
fn doubled_cycle_tour_is_the_sampled_cycle() {
    let sol = doubled_cycle(7, CostModel::Euclidean { seed: 5 }).unwrap();
    let (unit, g) = SupportGraph::from_solution(&sol).unwrap();
    let metric = metric_closure(&unit.solution, &g).unwrap();
    let h = build_hierarchy(&g).unwrap();
    let prep = PreparedInstance::<f64>::new(g, h, 1e-4).unwrap();
    for t in 0..20 {
        let tree = prep.sample(&mut stream(4, t, Purpose::Trees), &mut stream(4, t, Purpose::RootCycle)).unwrap();
        let join = min_ojoin(&metric, &tree.odd).unwrap();
        assert_eq!(join.cost, 0.0);
        let tour = shortcut(&prep.graph, &tree.edges, &join, &metric).unwrap();
        assert_eq!(tour.order.len(), 7);
        assert!((tour.cost - tree.cost(&prep.graph)).abs() < 1e-9);
    }
}

#[test]
fn library_tours_visit_each_vertex_once() {
    for (name, sol) in library() {
        let (unit, g) = SupportGraph::from_solution(&sol).unwrap();
        let metric = metric_closure(&unit.solution, &g).unwrap();
        let h = build_hierarchy(&g).unwrap();
        let prep = PreparedInstance::<f64>::new(g, h, 1e-4).unwrap();
        for t in 0..30 {
            let tree = prep.sample(&mut stream(8, t, Purpose::Trees), &mut stream(8, t, Purpose::RootCycle)).unwrap();
            let join = min_ojoin(&metric, &tree.odd).unwrap();
            if tree.odd.len() <= 10 {
                let best = brute_pairing(&|a, b| metric.d(a, b), &tree.odd);
                assert!((join.cost - best).abs() <= 1e-9 * (1.0 + best), "{name}");
            }
            assert!(join.cost <= prep.graph.cost_x / 2.0 + 1e-9, "{name}");
            let tour = shortcut(&prep.graph, &tree.edges, &join, &metric).unwrap();
            let mut seen = tour.order.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..sol.n).collect::<Vec<_>>(), "{name}");
            assert!(tour.cost <= tree.cost(&prep.graph) + join.cost + 1e-8, "{name}");
        }
    }
}
