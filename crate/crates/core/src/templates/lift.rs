use super::BipartiteTemplate;
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, Vertex};
use serde::{Deserialize, Serialize};

/// Which side of the k-partite lift a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    /// `X_i` for `i` in `1..=k-1`; `X_{k-1}` is the original `X`.
    X(usize),
    Y,
    Z,
}

/// The k-partite k-graph whose edges are the special paths
/// `X_1 - ... - X_{k-1} - (Y ∪ Z)`.
///
/// `X_i` occupies ids `(i-1)·3s .. i·3s` and vertex `j` of `X_i` is matched to
/// vertex `j` of `X_{i+1}`. The bipartite graph's ids are shifted up by
/// `(k-2)·3s`, so `Y` and `Z` come last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedTemplate {
    pub k: usize,
    pub s: usize,
    pub graph: Hypergraph,
    pub parts: Vec<Part>,
}

impl LiftedTemplate {
    fn offset(&self) -> Vertex {
        ((self.k - 2) * 3 * self.s) as Vertex
    }

    /// The lifted id of a vertex of the bipartite graph.
    pub fn lifted_id(&self, v: Vertex) -> Vertex {
        v + self.offset()
    }

    /// The special path through the bipartite edge `(x, w)`, sorted.
    pub fn lift_edge(&self, (x, w): (Vertex, Vertex)) -> Vec<Vertex> {
        lift_pair(self.k, self.s, x, w)
    }

    /// Extends a matching of the bipartite graph to vertex-disjoint special
    /// paths; the map is injective and preserves size.
    pub fn extend_matching(&self, pairs: &[(Vertex, Vertex)]) -> Vec<Vec<Vertex>> {
        pairs.iter().map(|&p| self.lift_edge(p)).collect()
    }

    /// Recovers the bipartite edge from a lifted edge.
    pub fn project_edge(&self, edge: &[Vertex]) -> (Vertex, Vertex) {
        let off = self.offset();
        let x = edge[self.k - 2] - off;
        let w = edge[self.k - 1] - off;
        (x, w)
    }

    pub fn z(&self) -> std::ops::Range<Vertex> {
        let off = self.offset();
        off + 5 * self.s as Vertex..off + 7 * self.s as Vertex
    }
}

pub(crate) fn lift_pair(k: usize, s: usize, x: Vertex, w: Vertex) -> Vec<Vertex> {
    let block = 3 * s as Vertex;
    let mut e: Vec<Vertex> = (0..k as Vertex - 1).map(|i| i * block + x).collect();
    e.push(w + (k as Vertex - 2) * block);
    e
}

/// Lifts a bipartite template to a k-partite k-graph (`k >= 2`; `k = 2` is the
/// bipartite graph itself).
pub fn lift_k_partite(r: &BipartiteTemplate, k: usize) -> Result<LiftedTemplate> {
    if k < 2 {
        return Err(Error::Size(format!("uniformity {k} is below 2")));
    }
    let s = r.s;
    let n = (k - 1) * 3 * s + 4 * s;
    let edges: Vec<Vec<Vertex>> = r
        .edges
        .iter()
        .map(|&(x, w)| lift_pair(k, s, x, w))
        .collect();
    let graph = Hypergraph::new(n, k, edges)?;
    let mut parts = Vec::with_capacity(n);
    for i in 1..k {
        parts.extend(std::iter::repeat_n(Part::X(i), 3 * s));
    }
    parts.extend(std::iter::repeat_n(Part::Y, 2 * s));
    parts.extend(std::iter::repeat_n(Part::Z, 2 * s));
    Ok(LiftedTemplate { k, s, graph, parts })
}
