use super::search::find_perfect_matching_on;
use super::Matching;
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, Vertex, VertexSet};
use crate::par;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOutcome {
    pub matching: Matching,
    /// The random blocks, each sorted.
    pub blocks: Vec<Vec<Vertex>>,
    /// Indices into `blocks` whose induced graph had no perfect matching
    /// (or whose search ran out of budget).
    pub failed_blocks: Vec<usize>,
    /// Vertices left uncovered: failed blocks plus the remainder.
    pub uncovered: VertexSet,
}

/// Splits all vertices at random into `n / q` blocks of size `q` and takes a
/// perfect matching inside each block that has one.
pub fn blockwise_almost_perfect(
    h: &Hypergraph,
    q: usize,
    seed: u64,
    budget: u64,
) -> Result<BlockOutcome> {
    blockwise_almost_perfect_on(h, &VertexSet::full(h.n()), q, seed, budget)
}

/// As [`blockwise_almost_perfect`], restricted to `vertices`.
pub fn blockwise_almost_perfect_on(
    h: &Hypergraph,
    vertices: &VertexSet,
    q: usize,
    seed: u64,
    budget: u64,
) -> Result<BlockOutcome> {
    if q == 0 || !q.is_multiple_of(h.k()) {
        return Err(Error::Precondition(format!(
            "block size {q} must be a positive multiple of k = {}",
            h.k()
        )));
    }
    if q > vertices.len() {
        return Err(Error::Precondition(format!(
            "block size {q} exceeds the {} available vertices",
            vertices.len()
        )));
    }
    let mut order: Vec<Vertex> = vertices.as_slice().to_vec();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let blocks: Vec<Vec<Vertex>> = order
        .chunks_exact(q)
        .map(|c| {
            let mut b = c.to_vec();
            b.sort_unstable();
            b
        })
        .collect();
    let results = par::map_slice(&blocks, |b| {
        let set = VertexSet::new(h.n(), b.iter().copied()).expect("block ids are in range");
        find_perfect_matching_on(h, &set, budget)
    });
    let mut edges = Vec::new();
    let mut failed = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        if r.is_perfect() {
            edges.extend(r.matching.into_edges());
        } else {
            failed.push(i);
        }
    }
    let matching = Matching::new(h.n(), h.k(), edges)?;
    let uncovered = vertices.difference(matching.covered());
    Ok(BlockOutcome {
        matching,
        blocks,
        failed_blocks: failed,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchpower::{verify_matching, DEFAULT_BUDGET};

    #[test]
    fn complete_graph_leaves_remainder() {
        let h = Hypergraph::complete(14, 3);
        let out = blockwise_almost_perfect(&h, 6, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(out.blocks.len(), 2);
        assert!(out.failed_blocks.is_empty());
        assert_eq!(out.uncovered.len(), 2);
        assert!(verify_matching(&h, out.matching.edges()).is_ok());
        assert_eq!(
            out,
            blockwise_almost_perfect(&h, 6, 3, DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn empty_graph_fails_everywhere() {
        let out = blockwise_almost_perfect(&Hypergraph::empty(12, 3), 6, 0, 100).unwrap();
        assert_eq!(out.failed_blocks, vec![0, 1]);
        assert!(out.matching.is_empty());
    }

    #[test]
    fn only_the_block_with_the_isolated_vertex_fails() {
        let h = Hypergraph::complete(12, 3).filter_edges(|_, e| e[0] != 0);
        for seed in 0..5 {
            let out = blockwise_almost_perfect(&h, 6, seed, DEFAULT_BUDGET).unwrap();
            let with_zero = out.blocks.iter().position(|b| b.contains(&0)).unwrap();
            assert_eq!(out.failed_blocks, vec![with_zero]);
        }
    }

    #[test]
    fn bad_block_size() {
        let h = Hypergraph::complete(6, 3);
        assert!(matches!(
            blockwise_almost_perfect(&h, 4, 0, 10),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            blockwise_almost_perfect(&h, 9, 0, 10),
            Err(Error::Precondition(_))
        ));
    }
}
