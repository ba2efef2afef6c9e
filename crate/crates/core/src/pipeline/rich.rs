use crate::combin::binom;
use crate::error::{Error, NotFoundReason, Result};
use crate::hypercore::{Hypergraph, Vertex, VertexSet};
use crate::seed::derive_seed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RichSet {
    pub z: VertexSet,
    /// Smallest number of edges `{v} ∪ S` with `S ⊆ Z` over `v ∉ Z`.
    pub min_outside_degree: u64,
    pub threshold: u64,
    pub trials_used: usize,
}

/// Degree into `z` of every vertex: the number of edges made of that vertex
/// and `k - 1` vertices of `z`. Entries for members of `z` are 0.
pub fn degrees_into(g: &Hypergraph, z: &VertexSet) -> Vec<u64> {
    let mut deg = vec![0u64; g.n()];
    for e in g.edges() {
        let mut outside = e.iter().filter(|&&v| !z.contains(v));
        if let (Some(&v), None) = (outside.next(), outside.next()) {
            deg[v as usize] += 1;
        }
    }
    deg
}

/// `⌈(density / 2) · C(size - 1, k - 1)⌉`, at least 1.
pub fn rich_threshold(size: usize, k: usize, density: f64) -> u64 {
    let full = binom(size.saturating_sub(1) as u64, k as u64 - 1) as f64;
    ((density / 2.0 * full).ceil() as u64).max(1)
}

/// Samples `size`-subsets until every outside vertex has degree at least
/// [`rich_threshold`] into the subset. Trial `t` uses `derive_seed(seed, t)`.
pub fn choose_rich_set(
    g: &Hypergraph,
    size: usize,
    density: f64,
    trials: usize,
    seed: u64,
) -> Result<RichSet> {
    let n = g.n();
    if size == 0 || size > n {
        return Err(Error::Size(format!(
            "rich set size {size} is outside 1..={n}"
        )));
    }
    let threshold = rich_threshold(size, g.k(), density);
    let mut best: Option<u64> = None;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
        let picked = rand::seq::index::sample(&mut rng, n, size)
            .into_iter()
            .map(|v| v as Vertex);
        let z = VertexSet::new(n, picked)?;
        let deg = degrees_into(g, &z);
        let min = (0..n)
            .filter(|&v| !z.contains(v as Vertex))
            .map(|v| deg[v])
            .min()
            .unwrap_or(u64::MAX);
        if min >= threshold {
            return Ok(RichSet {
                z,
                min_outside_degree: min,
                threshold,
                trials_used: t + 1,
            });
        }
        best = best.max(Some(min));
    }
    let deficit = threshold - best.unwrap_or(0);
    Err(Error::not_found(
        NotFoundReason::Budget,
        format!("no rich set of size {size} in {trials} trials; best candidate fell {deficit} short of {threshold}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_empty() {
        let g = Hypergraph::complete(12, 3);
        let r = choose_rich_set(&g, 4, 1.0, 5, 0).unwrap();
        assert_eq!(r.trials_used, 1);
        assert_eq!(r.min_outside_degree, 6);
        assert!(choose_rich_set(&Hypergraph::empty(12, 3), 4, 0.5, 5, 0).is_err());
    }

    #[test]
    fn dense_random_recheck() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = Hypergraph::complete(30, 3).filter_edges(|_, _| rng.gen_bool(0.8));
        let r = choose_rich_set(&g, 9, 0.8, 10, 1).unwrap();
        for v in (0..30).filter(|&v| !r.z.contains(v)) {
            let direct = g
                .edges()
                .filter(|e| e.contains(&v) && e.iter().filter(|&&u| r.z.contains(u)).count() == 2)
                .count();
            assert!(direct as u64 >= r.threshold);
        }
    }
}
