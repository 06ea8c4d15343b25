mod common;

use common::*;
use dhn_fairness::fairness::{combined_kpi, distance_index, jain_index, producer_loads, KpiReport, ProducerLoads};
use dhn_fairness::graph::ShortestPaths;
use dhn_fairness::solvers::Assignment;
use proptest::prelude::*;

fn assignment_strategy() -> impl Strategy<Value = (usize, Vec<usize>, usize)> {
    (0..SUITE_SIZE, 1usize..5).prop_flat_map(|(i, k)| {
        let n = suite_topology(i).node_count();
        (Just(i), prop::collection::vec(0..k, n), Just(k))
    })
}

#[test]
fn extreme_jain_values() {
    assert_eq!(jain_index(&ProducerLoads(vec![0.25; 4])).unwrap(), 1.0);
    assert_eq!(jain_index(&ProducerLoads(vec![1.0, 0.0, 0.0])).unwrap(), 1.0 / 3.0);
    assert!(jain_index(&ProducerLoads(vec![])).is_err());
    assert!(jain_index(&ProducerLoads(vec![0.0, 0.0])).is_err());
    assert!(jain_index(&ProducerLoads(vec![0.5, -0.1])).is_err());
}

#[test]
fn distance_index_end_points() {
    for (i, t) in suite().iter().enumerate() {
        let n = t.node_count();
        let paths = ShortestPaths::new(t);
        assert_eq!(distance_index(&Assignment::single_producer(n), &paths).unwrap(), 0.0, "suite {i}");
        let own = Assignment::new((0..n).collect(), n).unwrap();
        assert_eq!(distance_index(&own, &paths).unwrap(), 1.0, "suite {i}");
    }
}

proptest! {
    #[test]
    fn loads_accumulate_member_weights((i, p, k) in assignment_strategy()) {
        let n = p.len();
        let w = suite_weights(n, i as u64);
        let a = Assignment::new(p, k).unwrap();
        let y = producer_loads(&a, &w).unwrap();
        for (j, members) in a.members().iter().enumerate() {
            let expected: f64 = members.iter().map(|&m| w[m]).sum();
            prop_assert!((y.0[j] - expected).abs() < 1e-12);
        }
        prop_assert!((y.0.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn jain_bounds_and_invariances(y in prop::collection::vec(0.0f64..10.0, 1..10), scale in 1e-3f64..1e3, rot in 0usize..10) {
        prop_assume!(y.iter().any(|v| *v > 1e-6));
        let k = y.len() as f64;
        let j = jain_index(&ProducerLoads(y.clone())).unwrap();
        prop_assert!(j >= 1.0 / k - 1e-12 && j <= 1.0 + 1e-12);
        let scaled = jain_index(&ProducerLoads(y.iter().map(|v| v * scale).collect())).unwrap();
        prop_assert!((scaled - j).abs() < 1e-9);
        let mut rotated = y.clone();
        rotated.rotate_left(rot % y.len());
        prop_assert!((jain_index(&ProducerLoads(rotated)).unwrap() - j).abs() < 1e-12);
    }

    /// Moving the members of one producer with index >= 1 into a fresh
    /// producer never lowers the distance index.
    #[test]
    fn splitting_a_producer_raises_distance_index((i, p, k) in assignment_strategy(), pick in any::<prop::sample::Index>(), mask in any::<u64>()) {
        let t = suite_topology(i);
        let paths = ShortestPaths::new(&t);
        let a = Assignment::new(p.clone(), k).unwrap();
        let before = distance_index(&a, &paths).unwrap();
        prop_assert!((0.0..=1.0).contains(&before));
        let target = p[pick.index(p.len())];
        let split: Vec<usize> = p
            .iter()
            .enumerate()
            .map(|(n, &q)| if q == target && mask >> (n % 64) & 1 == 1 { k } else { q })
            .collect();
        let after = distance_index(&Assignment::new(split, k + 1).unwrap(), &paths).unwrap();
        prop_assert!(after >= before - 1e-12);
    }

    #[test]
    fn report_combines_both_indices((i, p, k) in assignment_strategy(), kpi_alpha in 0.0f64..=1.0) {
        let t = suite_topology(i);
        let w = suite_weights(p.len(), i as u64);
        let paths = ShortestPaths::new(&t);
        let a = Assignment::new(p, k).unwrap();
        let r = KpiReport::evaluate(&a, &w, &paths, kpi_alpha, "x", 0.0).unwrap();
        let expected = kpi_alpha * r.jain + (1.0 - kpi_alpha) * r.distance_index;
        prop_assert!((r.kpi - expected).abs() < 1e-12);
        prop_assert_eq!(combined_kpi(r.jain, r.distance_index, kpi_alpha).unwrap(), r.kpi);
        prop_assert!(combined_kpi(r.jain, r.distance_index, kpi_alpha + 1.5).is_err());
    }
}
