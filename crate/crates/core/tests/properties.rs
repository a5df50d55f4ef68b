use container_lab_core::bounds::{construct_cover, janson_bound, key_inequality_check, lymb_sum};
use container_lab_core::containers::{build_family, AlgorithmParams, FamilyOptions};
use container_lab_core::exact::Engine;
use container_lab_core::lemmas::verify_family;
use container_lab_core::rational::{int, pow, ratio};
use container_lab_core::{Hypergraph, Limits, Rational, VertexSet};
use proptest::prelude::*;

fn subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (0u64..1 << n).map(VertexSet::from_mask)
}

fn arb_hypergraph(max_n: usize, max_edges: usize, max_size: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_n).prop_flat_map(move |n| {
        let edge = proptest::collection::btree_set(0..n, 1..=max_size.min(n));
        proptest::collection::vec(edge, 0..=max_edges).prop_map(move |edges| {
            Hypergraph::new(n, edges.into_iter().map(|e| e.into_iter().collect::<VertexSet>())).unwrap()
        })
    })
}

fn arb_uniform(r: usize, max_n: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
    (r + 1..=max_n).prop_flat_map(move |n| {
        let edge = proptest::collection::btree_set(0..n, r);
        proptest::collection::vec(edge, 0..=max_edges).prop_map(move |edges| {
            Hypergraph::new(n, edges.into_iter().map(|e| e.into_iter().collect::<VertexSet>())).unwrap()
        })
    })
}

fn arb_p() -> impl Strategy<Value = Rational> {
    (1i64..=9, 10i64..=12).prop_map(|(a, b)| ratio(a, b))
}

fn subset_weight(p: &Rational, n: usize, k: usize) -> Rational {
    pow(p, k) * pow(&(int(1) - p), n - k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_brute_force(h in arb_hypergraph(9, 6, 4), p in arb_p(), l in 0u64..8) {
        let n = h.n();
        let engine = Engine::default();
        let mut prob = int(0);
        let mut size = int(0);
        let l = VertexSet::from_mask(l & ((1 << n) - 1));
        let mut with_l = int(0);
        for s in subsets(n).filter(|s| h.is_independent(s)) {
            let w = subset_weight(&p, n, s.len());
            size += &w * int(s.len());
            if l.iter().all(|v| s.contains(v)) {
                with_l += &w;
            }
            prob += w;
        }
        prop_assert_eq!(engine.prob_independent(&h, &p).unwrap(), prob.clone());
        prop_assert_eq!(engine.conditional_expected_size(&h, &p).unwrap(), &size / &prob);
        prop_assert_eq!(engine.conditional_subset_prob(&h, &p, &l).unwrap(), &with_l / &prob);
    }

    #[test]
    fn partition_function_matches_brute_force(h in arb_hypergraph(8, 6, 3), a in 1i64..6, b in 1i64..4) {
        let lambda = ratio(a, b);
        let z: Rational = subsets(h.n()).filter(|s| h.is_independent(s)).map(|s| pow(&lambda, s.len())).sum();
        prop_assert_eq!(Engine::default().partition_function(&h, &lambda).unwrap().z, z);
    }

    #[test]
    fn constructed_cover_covers(h in arb_uniform(3, 11, 20), eighth in any::<bool>()) {
        let p = if eighth { ratio(1, 24) } else { ratio(1, 13) };
        let c = construct_cover(&h, &p).unwrap();
        prop_assert!(c.g.covers(&h));
        prop_assert!(c.g.is_antichain());
        prop_assert!(c.g.edges().iter().all(|e| e.len() <= 3));
    }

    #[test]
    fn key_inequality_on_random_hypergraphs(h in arb_hypergraph(9, 8, 3), p in arb_p()) {
        prop_assert!(key_inequality_check(&h, &p, &Engine::default()).unwrap().holds());
    }

    #[test]
    fn janson_dominates_exact(h in arb_uniform(2, 10, 15), p in arb_p()) {
        let prob = Engine::default().prob_independent(&h, &p).unwrap();
        prop_assert!(janson_bound(&h, &p).unwrap().dominates(&prob).holds());
    }

    #[test]
    fn lymb_on_minimal_elements(h in arb_hypergraph(10, 12, 4)) {
        let sum = lymb_sum(&h.minimal_elements()).unwrap();
        prop_assert!(sum <= int(1));
    }

    #[test]
    fn cover_family_contains_every_independent_set(h in arb_uniform(2, 10, 25)) {
        let params = AlgorithmParams::cover(ratio(1, 32));
        let family = build_family(&h, &params, &FamilyOptions::checked()).unwrap();
        let inputs = Engine::default().independent_sets(&h).unwrap();
        for i in &inputs {
            let e = family.lookup(i).unwrap();
            prop_assert!(e.s.is_subset(i) && i.is_subset(&e.c));
        }
        let report = verify_family(&family, &params, &Limits::default(), inputs).unwrap();
        prop_assert!(report.all_passed(), "{:?}", report);
    }

    #[test]
    fn hardcore_family_passes(h in arb_hypergraph(9, 8, 3)) {
        let params = AlgorithmParams::hardcore(ratio(1, 4), ratio(1, 4));
        let family = build_family(&h, &params, &FamilyOptions::checked()).unwrap();
        let inputs = Engine::default().independent_sets(&h).unwrap();
        let report = verify_family(&family, &params, &Limits::default(), inputs).unwrap();
        prop_assert!(report.all_passed(), "{:?}", report);
    }
}
