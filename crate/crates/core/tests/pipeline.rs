use hyperdirac::lab::sample_hk;
use hyperdirac::matchpower::{verify_exact_cover, verify_perfect_matching};
use hyperdirac::pipeline::{
    absorb_and_complete, build_absorbing_set, dirac_perfect_matching, PipelineParams,
};
use hyperdirac::{Hypergraph, Vertex, VertexSet};
use proptest::prelude::*;

#[test]
fn dense_random_hosts_succeed() {
    let params = PipelineParams::default();
    let mut tried = 0;
    for seed in 0..12 {
        let g = sample_hk(30, 3, 0.92, seed).unwrap();
        if g.min_d_degree(2).unwrap().value < 20 {
            continue;
        }
        tried += 1;
        let r = dirac_perfect_matching(&g, 2, 0.1, &params, seed);
        assert!(r.success, "seed {seed}: {:?}", r.stages.last());
        verify_perfect_matching(&g, r.matching.as_ref().unwrap()).unwrap();
    }
    assert!(tried >= 6, "only {tried} hosts met the degree condition");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // soundness: whatever the input, a reported success is a perfect matching
    #[test]
    fn success_implies_verified_matching(p in 0.3f64..1.0, seed in any::<u64>()) {
        let g = sample_hk(18, 3, p, seed).unwrap();
        let r = dirac_perfect_matching(&g, 2, 0.1, &PipelineParams::default(), seed);
        prop_assert_eq!(r.success, r.matching.is_some());
        prop_assert_eq!(r.success, r.failure_stage.is_none());
        if let Some(m) = &r.matching {
            prop_assert!(verify_perfect_matching(&g, m).is_ok());
        }
    }

    #[test]
    fn reports_are_deterministic(seed in 0u64..50) {
        let g = sample_hk(18, 3, 0.9, seed).unwrap();
        let params = PipelineParams::default();
        let a = dirac_perfect_matching(&g, 2, 0.1, &params, seed).to_json().unwrap();
        let b = dirac_perfect_matching(&g, 2, 0.1, &params, seed).to_json().unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn absorb_covers_exactly_x_and_w_and_survives_extra_edges() {
    let n = 36;
    let sparse = sample_hk(n, 3, 0.9, 9).unwrap();
    let dense =
        Hypergraph::complete(n, 3).filter_edges(|i, e| sparse.contains_edge(e) || i % 3 == 0);
    let a = (0..10)
        .find_map(|seed| build_absorbing_set(&sparse, 0.1, &PipelineParams::default(), seed).ok())
        .expect("an absorbing set within ten seeds");
    let outside: Vec<Vertex> = a.x.complement().iter().collect();
    let mut absorbed = 0;
    for size in 0..=a.lambda_cap {
        if (a.x.len() + size) % 3 != 0 {
            continue;
        }
        for start in 0..outside.len().saturating_sub(size).min(5) {
            let w = VertexSet::new(n, outside[start..start + size].iter().copied()).unwrap();
            let Ok(m) = absorb_and_complete(&sparse, &a, &w, u64::MAX) else {
                continue;
            };
            absorbed += 1;
            let target = a.x.union(&w);
            assert!(verify_exact_cover(&sparse, m.edges(), &target).is_ok());
            // more edges never hurt: the same set still absorbs W in the supergraph
            let again = absorb_and_complete(&dense, &a, &w, u64::MAX).unwrap();
            assert!(verify_exact_cover(&dense, again.edges(), &target).is_ok());
        }
    }
    assert!(absorbed > 0);
}
