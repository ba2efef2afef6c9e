use crate::combin::{binom, colex_unrank};
use crate::error::{Error, NotFoundReason, Result};
use crate::hypercore::{Hypergraph, Vertex};
use crate::par;
use crate::seed::derive_seed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Independence checks on at most this many vertices are exact.
pub const OVERLAY_EXACT_LIMIT: usize = 24;
/// Random `⌈r/2⌉`-sets tried above the exact limit.
pub const OVERLAY_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlay {
    pub graph: Hypergraph,
    /// `true` when the independence check was exhaustive.
    pub exact: bool,
    pub trials_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceCheck {
    /// No independent set of size `⌈n/2⌉` was found.
    pub holds: bool,
    pub exact: bool,
}

/// Looks for an independent set of size `⌈n/2⌉`: exact depth-first search for
/// `n <= 24`, random sampling above.
pub fn has_no_half_independent_set(h: &Hypergraph, seed: u64) -> IndependenceCheck {
    let n = h.n();
    let t = n.div_ceil(2);
    if h.edge_count() == 0 {
        return IndependenceCheck {
            holds: t == 0,
            exact: true,
        };
    }
    if n <= OVERLAY_EXACT_LIMIT {
        let masks: Vec<u32> = h
            .edges()
            .map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        let mut through: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &m in &masks {
            // an edge can only close at its largest vertex
            through[31 - m.leading_zeros() as usize].push(m);
        }
        let found = independent_dfs(0, 0, 0, n, t, &through);
        return IndependenceCheck {
            holds: !found,
            exact: true,
        };
    }
    let bad = par::find_first(OVERLAY_SAMPLES, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
        let mut inside = vec![false; n];
        for v in rand::seq::index::sample(&mut rng, n, t) {
            inside[v] = true;
        }
        (!h.edges().any(|e| e.iter().all(|&v| inside[v as usize]))).then_some(())
    });
    IndependenceCheck {
        holds: bad.is_none(),
        exact: false,
    }
}

fn independent_dfs(
    v: usize,
    chosen: u32,
    size: usize,
    n: usize,
    t: usize,
    through: &[Vec<u32>],
) -> bool {
    if size == t {
        return true;
    }
    if v == n || size + (n - v) < t {
        return false;
    }
    let with = chosen | 1 << v;
    if through[v].iter().all(|&e| e & !with != 0)
        && independent_dfs(v + 1, with, size + 1, n, t, through)
    {
        return true;
    }
    independent_dfs(v + 1, chosen, size, n, t, through)
}

/// Samples k-graphs on `r` vertices with `min(edge_budget, C(r, k))` distinct
/// uniformly random edges until one has no independent set of size `⌈r/2⌉`.
pub fn independent_free_overlay(
    r: usize,
    k: usize,
    edge_budget: usize,
    seed: u64,
    trials: usize,
) -> Result<Overlay> {
    if k == 0 || k > r {
        return Err(Error::Size(format!(
            "need 1 <= k <= r, got k = {k}, r = {r}"
        )));
    }
    if r.div_ceil(2) < k {
        return Err(Error::Size(format!(
            "every set of {} vertices is independent when k = {k}",
            r.div_ceil(2)
        )));
    }
    let all = binom(r as u64, k as u64);
    if all > u32::MAX as u64 {
        return Err(Error::Capacity(format!(
            "C({r}, {k}) is too large to sample from"
        )));
    }
    let m = edge_budget.min(all as usize);
    let found = par::find_first(trials, |t| {
        let ts = derive_seed(seed, t as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);
        let edges: Vec<Vec<Vertex>> = rand::seq::index::sample(&mut rng, all as usize, m)
            .into_iter()
            .map(|i| colex_unrank(i, k))
            .collect();
        let g = Hypergraph::from_edges_dedup(r, k, edges).expect("sampled k-sets are valid");
        let c = has_no_half_independent_set(&g, ts);
        c.holds.then_some((g, c.exact))
    });
    match found {
        Some((t, (graph, exact))) => Ok(Overlay { graph, exact, trials_used: t + 1 }),
        None => Err(Error::not_found(
            NotFoundReason::Budget,
            format!("no {k}-graph on {r} vertices with {m} edges avoided half-size independent sets in {trials} trials"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::subsets;

    fn brute(h: &Hypergraph) -> bool {
        let t = h.n().div_ceil(2);
        subsets(h.n(), t).all(|s| h.edges().any(|e| e.iter().all(|v| s.contains(v))))
    }

    #[test]
    fn forced_complete_at_r_equal_2k() {
        let o = independent_free_overlay(6, 3, 100, 1, 5).unwrap();
        assert_eq!(o.graph, Hypergraph::complete(6, 3));
        assert!(o.exact);
        // one edge short of complete always leaves an independent triple
        assert!(independent_free_overlay(6, 3, 19, 1, 50).is_err());
    }

    #[test]
    fn empty_graph_fails() {
        assert!(!has_no_half_independent_set(&Hypergraph::empty(8, 3), 0).holds);
    }

    #[test]
    fn r12_agrees_with_enumeration() {
        let o = independent_free_overlay(12, 3, 48, 3, 200).unwrap();
        assert!(o.exact);
        assert!(brute(&o.graph));
        for seed in 0..40u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let edges: Vec<Vec<Vertex>> =
                rand::seq::index::sample(&mut rng, 220, 30 + seed as usize)
                    .into_iter()
                    .map(|i| colex_unrank(i, 3))
                    .collect();
            let g = Hypergraph::from_edges_dedup(12, 3, edges).unwrap();
            assert_eq!(
                has_no_half_independent_set(&g, 0).holds,
                brute(&g),
                "seed {seed}"
            );
        }
    }
}
