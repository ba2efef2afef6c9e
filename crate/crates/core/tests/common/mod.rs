#![allow(dead_code)]

use hyperdirac::combin::subsets;
use hyperdirac::{Hypergraph, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Keeps each k-set of `0..n` with probability `p`.
pub fn random_graph(n: usize, k: usize, p: f64, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<Vec<u32>> = subsets(n, k).filter(|_| rng.gen_bool(p)).collect();
    Hypergraph::new(n, k, edges).unwrap()
}

/// Small random k-graphs with `n` in `lo..=hi`.
pub fn small_graph(lo: usize, hi: usize) -> impl Strategy<Value = Hypergraph> {
    (lo..=hi, 2usize..=4, 0.05f64..0.95, any::<u64>())
        .prop_filter("k <= n", |(n, k, _, _)| k <= n)
        .prop_map(|(n, k, p, seed)| random_graph(n, k, p, seed))
}

/// Does any choice of `n / k` edges cover every vertex? Plain subset
/// enumeration over edge indices.
pub fn naive_has_pm(h: &Hypergraph) -> bool {
    let (n, k) = (h.n(), h.k());
    if n % k != 0 {
        return false;
    }
    let edges = h.edge_list();
    let want = n / k;
    fn pick(edges: &[Vec<Vertex>], from: usize, left: usize, used: u64) -> bool {
        if left == 0 {
            return true;
        }
        (from..edges.len()).any(|i| {
            let mask = edges[i].iter().fold(0u64, |m, &v| m | 1 << v);
            mask & used == 0 && pick(edges, i + 1, left - 1, used | mask)
        })
    }
    pick(&edges, 0, want, 0)
}
