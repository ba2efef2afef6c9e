mod common;

use common::naive_has_pm;
use hyperdirac::combin::{binom, subsets};
use hyperdirac::matchpower::{max_matching, MaxMode};
use hyperdirac::thresholds::{
    conjectured_density, exact_dirac_threshold, parity_barrier, space_barrier, PmFreeProof,
};
use hyperdirac::{Hypergraph, Vertex};
use num_rational::Ratio;
use proptest::prelude::*;

fn from_mask(n: usize, k: usize, mask: u64) -> Hypergraph {
    let edges: Vec<Vec<Vertex>> = subsets(n, k)
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    Hypergraph::new(n, k, edges).unwrap()
}

#[test]
fn barriers_are_pm_free() {
    for (n, k) in [
        (6, 2),
        (8, 2),
        (10, 2),
        (6, 3),
        (9, 3),
        (12, 3),
        (8, 4),
        (12, 4),
        (10, 5),
    ] {
        for d in 1..k {
            for b in [space_barrier(n, k, d), parity_barrier(n, k, d)] {
                let Ok(b) = b else { continue };
                let g = &b.graph;
                assert_eq!(b.min_degree.value, g.min_d_degree(d).unwrap().value);
                match b.proof {
                    PmFreeProof::Oracle => assert!(!naive_has_pm(g)),
                    PmFreeProof::Counting => {
                        let m = max_matching(g, MaxMode::Exact, 50_000_000);
                        assert!(!m.optimal || k * m.matching.len() < n);
                    }
                }
            }
        }
    }
}

#[test]
fn space_barrier_degree_has_closed_form() {
    for (n, k, d) in [(9, 3, 1), (12, 3, 2), (12, 4, 1), (12, 4, 3), (15, 3, 1)] {
        let b = space_barrier(n, k, d).unwrap();
        let s = (n / k - 1) as u64;
        let (n, k, d) = (n as u64, k as u64, d as u64);
        assert_eq!(
            b.min_degree.value,
            binom(n - d, k - d) - binom(n - d - s, k - d)
        );
    }
}

#[test]
fn conjectured_density_values() {
    assert_eq!(conjectured_density(2, 3).unwrap(), Ratio::new(1, 2));
    assert_eq!(conjectured_density(1, 3).unwrap(), Ratio::new(5, 9));
    assert_eq!(conjectured_density(1, 4).unwrap(), Ratio::new(37, 64));
    assert_eq!(conjectured_density(3, 4).unwrap(), Ratio::new(1, 2));
    assert!(conjectured_density(0, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    // every 3-graph on six vertices at or above the threshold has a perfect matching
    #[test]
    fn above_threshold_always_matches(mask in 0u64..(1 << 20)) {
        let h = from_mask(6, 3, mask);
        let m2 = 3;
        if h.min_d_degree(2).unwrap().value >= m2 {
            prop_assert!(naive_has_pm(&h));
        }
    }
}

#[test]
fn threshold_witnesses_are_extremal() {
    for (n, k, d) in [(4, 2, 1), (6, 2, 1), (6, 3, 2), (6, 3, 1)] {
        let r = exact_dirac_threshold(n, k, d).unwrap();
        let w = &r.extremal_witness;
        assert!(!naive_has_pm(w), "({n},{k},{d}) witness has a PM");
        assert_eq!(w.min_d_degree(d).unwrap().value + 1, r.m_value);
        assert!(r.m_value <= binom((n - d) as u64, (k - d) as u64));
    }
    assert_eq!(exact_dirac_threshold(6, 3, 2).unwrap().m_value, 3);
}
