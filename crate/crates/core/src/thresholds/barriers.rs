use crate::combin::{binom, subsets};
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, MinDegree, Vertex, VertexSet};
use crate::matchpower::{find_perfect_matching, MatchStatus};
use serde::{Deserialize, Serialize};

/// Node budget for the PM-freeness check made at construction.
const ORACLE_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PmFreeProof {
    /// The exact oracle exhausted its search.
    Oracle,
    /// The oracle ran out of budget; the defining counting property was
    /// checked edge by edge instead.
    Counting,
}

/// A PM-free extremal construction with its minimum d-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Barrier {
    pub graph: Hypergraph,
    /// `S` for the space barrier, `A` for the parity barrier.
    pub special: VertexSet,
    pub min_degree: MinDegree,
    pub proof: PmFreeProof,
}

impl Barrier {
    /// `δ_d / C(n-d, k-d)` as a float, for tables.
    pub fn density(&self) -> f64 {
        let n = self.graph.n() as u64;
        let (k, d) = (self.graph.k() as u64, self.min_degree.witness.len() as u64);
        self.min_degree.value as f64 / binom(n - d, k - d) as f64
    }
}

fn check(n: usize, k: usize, d: usize) -> Result<()> {
    if k < 2 || !n.is_multiple_of(k) {
        return Err(Error::Size(format!(
            "need k >= 2 and k | n, got n={n}, k={k}"
        )));
    }
    if d == 0 || d >= k {
        return Err(Error::Size(format!("need 1 <= d < k, got d={d}")));
    }
    Ok(())
}

fn pm_free(g: &Hypergraph, counting: impl Fn(&[Vertex]) -> bool) -> Result<PmFreeProof> {
    match find_perfect_matching(g, ORACLE_BUDGET).status {
        MatchStatus::None => Ok(PmFreeProof::Oracle),
        MatchStatus::Perfect => Err(Error::Precondition(
            "barrier construction has a perfect matching".into(),
        )),
        MatchStatus::Partial if g.edges().all(counting) => Ok(PmFreeProof::Counting),
        MatchStatus::Partial => Err(Error::Precondition(
            "barrier construction failed its counting check".into(),
        )),
    }
}

/// All k-sets meeting `S = {0, .., n/k - 2}`. Every matching edge uses a
/// vertex of `S`, so no matching has `n/k` edges.
pub fn space_barrier(n: usize, k: usize, d: usize) -> Result<Barrier> {
    check(n, k, d)?;
    if n < 2 * k {
        return Err(Error::Size(format!(
            "space barrier needs n >= 2k, got n={n}, k={k}"
        )));
    }
    let s = (n / k - 1) as Vertex;
    let graph = Hypergraph::from_edges_dedup(n, k, subsets(n, k).filter(|e| e[0] < s))?;
    let proof = pm_free(&graph, |e| e[0] < s)?;
    let min_degree = graph.min_d_degree(d)?;
    Ok(Barrier {
        graph,
        special: VertexSet::new(n, 0..s)?,
        min_degree,
        proof,
    })
}

/// All k-sets meeting `A = {0, .., a-1}` in an even number of vertices, with
/// `a` odd. `a` is the odd number nearest `n/2`; a tie goes to the larger
/// minimum d-degree, then to the smaller `a`.
pub fn parity_barrier(n: usize, k: usize, d: usize) -> Result<Barrier> {
    check(n, k, d)?;
    let half = n / 2;
    let candidates: Vec<usize> = if half % 2 == 1 {
        vec![half]
    } else {
        [half.checked_sub(1), Some(half + 1)]
            .into_iter()
            .flatten()
            .filter(|&a| a >= 1 && a <= n)
            .collect()
    };
    let mut best: Option<(Hypergraph, usize, MinDegree)> = None;
    for a in candidates {
        let g = parity_graph(n, k, a)?;
        let md = g.min_d_degree(d)?;
        if best.as_ref().is_none_or(|(_, _, b)| md.value > b.value) {
            best = Some((g, a, md));
        }
    }
    let (graph, a, min_degree) =
        best.ok_or_else(|| Error::Size("no odd part size available".into()))?;
    let av = a as Vertex;
    let proof = pm_free(&graph, |e| e.iter().filter(|&&v| v < av).count() % 2 == 0)?;
    Ok(Barrier {
        graph,
        special: VertexSet::new(n, 0..av)?,
        min_degree,
        proof,
    })
}

fn parity_graph(n: usize, k: usize, a: usize) -> Result<Hypergraph> {
    let a = a as Vertex;
    Hypergraph::from_edges_dedup(
        n,
        k,
        subsets(n, k).filter(|e| e.iter().filter(|&&v| v < a).count() % 2 == 0),
    )
}
