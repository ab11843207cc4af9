use std::collections::BTreeSet;

use minor_probe::cycle::{test_cycle_free, CycleConfig};
use minor_probe::exact::exact_distance_to_cycle_free;
use minor_probe::generators::{gen_far_from_cycle_free, gen_forest};
use minor_probe::{verify_certificate, Certificate, Graph, QueryError, QueryOracle, TestError, Verdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Simple graph on `n` vertices from an arbitrary list of vertex pairs.
fn graph_from_pairs(n: usize, pairs: &[(u32, u32)]) -> Graph {
    let edges: BTreeSet<(u32, u32)> = pairs
        .iter()
        .map(|&(a, b)| (a % n as u32 + 1, b % n as u32 + 1))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    let mut deg = vec![0usize; n + 1];
    for &(a, b) in &edges {
        deg[a as usize] += 1;
        deg[b as usize] += 1;
    }
    let d = deg.into_iter().max().unwrap_or(0).max(1);
    Graph::from_edges(n, d, edges).expect("simple graph")
}

fn components(g: &Graph) -> usize {
    g.components().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_round_trips(n in 1usize..30, pairs in prop::collection::vec((0u32..64, 0u32..64), 0..60)) {
        let g = graph_from_pairs(n, &pairs);
        let back = Graph::parse(&g.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), g.to_text());
        prop_assert_eq!(back.edge_count(), g.edge_count());
    }

    #[test]
    fn cycle_distance_is_cyclomatic_number(n in 1usize..9, pairs in prop::collection::vec((0u32..16, 0u32..16), 0..14)) {
        let g = graph_from_pairs(n, &pairs);
        let want = g.edge_count() + components(&g) - g.n();
        prop_assert_eq!(exact_distance_to_cycle_free(&g), want);
    }

    #[test]
    fn cycle_tester_never_rejects_forests(n in 16usize..400, seed in any::<u64>(), eps in 0.05f64..1.0) {
        let g = gen_forest(n, 3, seed).unwrap();
        let mut o = QueryOracle::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let v = test_cycle_free(&mut o, eps, &CycleConfig::default(), &mut rng).unwrap();
        prop_assert_eq!(v, Verdict::Accept);
    }

    #[test]
    fn cycle_tester_rejections_verify(n in 64usize..512, seed in any::<u64>()) {
        let g = gen_far_from_cycle_free(n, 3, 0.1, seed).unwrap();
        let mut o = QueryOracle::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Verdict::Reject(cert) = test_cycle_free(&mut o, 0.1, &CycleConfig::default(), &mut rng).unwrap() {
            prop_assert!(verify_certificate(&g, &cert).is_ok());
            let back = Certificate::from_json(&cert.to_json()).unwrap();
            prop_assert_eq!(back, cert);
        }
    }

    #[test]
    fn budget_is_never_exceeded(budget in 0u64..200, seed in any::<u64>()) {
        let g = gen_far_from_cycle_free(256, 3, 0.1, seed).unwrap();
        let mut o = QueryOracle::with_budget(&g, Some(budget));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match test_cycle_free(&mut o, 0.1, &CycleConfig::default(), &mut rng) {
            Ok(_) | Err(TestError::Query(QueryError::BudgetExhausted { .. })) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
        let c = o.counts();
        prop_assert!(c.neighbor + c.degree <= budget);
    }
}
