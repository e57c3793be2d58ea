use proptest::prelude::*;

use halftsp::cuts::build_hierarchy;
use halftsp::generate::{generate, CostModel, InstanceKind};
use halftsp::instance::{validate, DistanceOracle, SupportGraph};
use halftsp::join::min_ojoin;
use halftsp::maxent::{enumerate_trees, exact_marginals, tree_marginals, TreeDistribution};
use halftsp::Solver;

fn instance() -> impl Strategy<Value = (InstanceKind, usize, u64)> {
    prop_oneof![
        (3usize..10).prop_map(|n| (InstanceKind::DoubledCycle, n)),
        (2usize..5).prop_map(|b| (InstanceKind::K4Chain, b)),
        Just((InstanceKind::NestedCycle, 2)),
    ]
    .prop_flat_map(|(k, s)| (Just(k), Just(s), any::<u64>()))
}

fn euclidean(points: &[(f64, f64)]) -> DistanceOracle {
    let d = points
        .iter()
        .map(|a| points.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
        .collect();
    DistanceOracle::from_matrix(d)
}

/// Cheapest pairing by trying every partner of the first vertex.
fn cheapest_pairing(m: &DistanceOracle, odd: &[usize]) -> f64 {
    if odd.is_empty() {
        return 0.0;
    }
    (1..odd.len())
        .map(|j| {
            let rest: Vec<usize> = odd[1..].iter().enumerate().filter(|&(i, _)| i + 1 != j).map(|(_, &v)| v).collect();
            m.d(odd[0], odd[j]) + cheapest_pairing(m, &rest)
        })
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn generated_instances_are_valid_and_structured((kind, size, seed) in instance()) {
        let sol = generate(kind, size, CostModel::Euclidean { seed }).unwrap();
        prop_assert!(validate(&sol).is_valid());
        let (_, g) = SupportGraph::from_solution(&sol).unwrap();
        let h = build_hierarchy(&g).unwrap();
        prop_assert!(h.check_facts(&g).is_empty());
    }

    #[test]
    fn trials_give_tours_within_bounds((kind, size, seed) in instance(), t in 0u64..1000) {
        let sol = generate(kind, size, CostModel::Euclidean { seed }).unwrap();
        let solver = Solver::new(&sol, 1e-4).unwrap();
        let r = solver.trial(seed, t).unwrap();
        let lp = solver.lp_cost();
        prop_assert!(r.odd_vertices % 2 == 0);
        prop_assert!(r.join_cost <= 0.5 * lp + 1e-9);
        prop_assert!(r.tour_cost <= r.tree_cost + r.join_cost + 1e-9);
        // A closed tour through u and v costs at least 2·d(u, v).
        let far = (0..sol.n).flat_map(|u| (0..sol.n).map(move |v| (u, v))).map(|(u, v)| solver.metric.d(u, v)).fold(0.0, f64::max);
        prop_assert!(r.tour_cost >= 2.0 * far - 1e-9);
    }

    #[test]
    fn join_matches_pairing_search(
        points in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..11),
        pick in any::<u64>(),
    ) {
        let m = euclidean(&points);
        let mut odd: Vec<usize> = (0..points.len()).filter(|i| pick >> i & 1 == 1).collect();
        if odd.len() % 2 == 1 {
            odd.pop();
        }
        let join = min_ojoin(&m, &odd).unwrap();
        let best = cheapest_pairing(&m, &odd);
        prop_assert!((join.cost - best).abs() <= 1e-9 * best.max(1.0), "{} vs {}", join.cost, best);
    }

    #[test]
    fn marginals_agree_with_enumeration(lambda in prop::collection::vec(0.05f64..5.0, 6)) {
        let ends = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let dist = TreeDistribution::with_lambda(4, ends.clone(), lambda.clone()).unwrap();
        let trees = enumerate_trees(&dist).unwrap();
        prop_assert_eq!(trees.len(), 16);
        let enumerated = tree_marginals(&trees, 6);
        let formula = exact_marginals(4, &ends, &lambda).unwrap();
        prop_assert!((formula.iter().sum::<f64>() - 3.0).abs() < 1e-9);
        for (a, b) in enumerated.iter().zip(&formula) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
