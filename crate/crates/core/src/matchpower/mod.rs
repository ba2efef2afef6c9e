//! Matching engines: the perfect-matching oracle, maximum matchings, the
//! Aharoni–Haxell criterion with disjoint-representative search, matching
//! into a flexible set and the block-partition almost-perfect procedure.

mod bipartite;
mod blocks;
mod representatives;
mod search;

pub use bipartite::bipartite_matching;
pub use blocks::{blockwise_almost_perfect, blockwise_almost_perfect_on, BlockOutcome};
pub use representatives::{
    aharoni_haxell_holds, find_disjoint_representatives, match_into_flexible, AhMode, AhReport,
    AH_EXACT_LIMIT,
};
pub use search::{
    find_perfect_matching, find_perfect_matching_on, max_matching, MaxMatching, MaxMode,
};

use crate::error::{Error, Result};
use crate::hypercore::{Host, Hypergraph, Vertex, VertexSet};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Node budget used when callers do not pick one.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Vertex-disjoint k-sets, kept sorted, with their union cached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    k: usize,
    edges: Vec<Vec<Vertex>>,
    covered: VertexSet,
}

impl Matching {
    /// Sorts each edge and the edge list; fails if the edges overlap or have
    /// the wrong size.
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Vec<Vertex>>) -> Result<Self> {
        let mut list: Vec<Vec<Vertex>> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        if let Some(e) = list.iter().find(|e| e.len() != k) {
            return Err(Error::Shape(format!(
                "matching edge {e:?} does not have {k} vertices"
            )));
        }
        list.sort_unstable();
        let all: Vec<Vertex> = list.iter().flatten().copied().collect();
        let covered = VertexSet::new(n, all.iter().copied())?;
        if covered.len() != all.len() {
            return Err(Error::Shape("matching edges are not disjoint".into()));
        }
        Ok(Matching {
            k,
            edges: list,
            covered,
        })
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Matching {
            k,
            edges: Vec::new(),
            covered: VertexSet::empty(n),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn covered(&self) -> &VertexSet {
        &self.covered
    }

    pub fn into_edges(self) -> Vec<Vec<Vertex>> {
        self.edges
    }

    /// Disjoint union of two matchings on the same ground set.
    pub fn merge(&self, other: &Matching) -> Result<Matching> {
        Matching::new(
            self.covered.capacity().max(other.covered.capacity()),
            self.k,
            self.edges.iter().chain(other.edges.iter()).cloned(),
        )
    }

    /// One edge per line, ascending ids.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Parses the matching text format (blank lines and `#` comments skipped).
pub fn parse_matching(text: &str) -> Result<Vec<Vec<Vertex>>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let e = t
            .split_whitespace()
            .map(|s| {
                s.parse::<Vertex>()
                    .map_err(|_| Error::parse(i + 1, format!("bad vertex id {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(e);
    }
    Ok(out)
}

/// Why a claimed matching is not one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingDefect {
    NotAnEdge(Vec<Vertex>),
    Overlap(Vertex),
    Uncovered(Vertex),
    /// Covered but not meant to be.
    Outside(Vertex),
}

impl fmt::Display for MatchingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingDefect::NotAnEdge(e) => write!(f, "{e:?} is not an edge of the host"),
            MatchingDefect::Overlap(v) => write!(f, "vertex {v} lies in two matching edges"),
            MatchingDefect::Uncovered(v) => write!(f, "vertex {v} is not covered"),
            MatchingDefect::Outside(v) => {
                write!(f, "vertex {v} is covered but lies outside the target set")
            }
        }
    }
}

/// Checks that `edges` are pairwise disjoint edges of `host`. Deliberately
/// shares no code with the searches.
pub fn verify_matching<E: AsRef<[Vertex]>>(
    host: &Hypergraph,
    edges: &[E],
) -> Result<(), MatchingDefect> {
    let mut seen = vec![false; host.n()];
    for e in edges {
        let e = e.as_ref();
        let mut sorted = e.to_vec();
        sorted.sort_unstable();
        if sorted.len() != host.k() || !host.edges().any(|h| h == sorted.as_slice()) {
            return Err(MatchingDefect::NotAnEdge(e.to_vec()));
        }
        for &v in e {
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(MatchingDefect::Overlap(v));
            }
        }
    }
    Ok(())
}

/// [`verify_matching`] plus coverage of every vertex.
pub fn verify_perfect_matching<E: AsRef<[Vertex]>>(
    host: &Hypergraph,
    edges: &[E],
) -> Result<(), MatchingDefect> {
    verify_matching(host, edges)?;
    let mut seen = vec![false; host.n()];
    edges
        .iter()
        .flat_map(|e| e.as_ref().iter())
        .for_each(|&v| seen[v as usize] = true);
    match seen.iter().position(|&s| !s) {
        Some(v) => Err(MatchingDefect::Uncovered(v as Vertex)),
        None => Ok(()),
    }
}

/// Checks that `edges` are pairwise disjoint edges of any [`Host`] whose
/// union is exactly `target`.
pub fn verify_exact_cover<H, E>(
    host: &H,
    edges: &[E],
    target: &VertexSet,
) -> Result<(), MatchingDefect>
where
    H: Host + ?Sized,
    E: AsRef<[Vertex]>,
{
    let mut seen = vec![false; host.vertex_count()];
    for e in edges {
        let e = e.as_ref();
        let mut sorted = e.to_vec();
        sorted.sort_unstable();
        if sorted.len() != host.uniformity()
            || sorted.iter().any(|&v| v as usize >= seen.len())
            || !host.has_edge(&sorted)
        {
            return Err(MatchingDefect::NotAnEdge(e.to_vec()));
        }
        for &v in e {
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(MatchingDefect::Overlap(v));
            }
            if !target.contains(v) {
                return Err(MatchingDefect::Outside(v));
            }
        }
    }
    match target.iter().find(|&v| !seen[v as usize]) {
        Some(v) => Err(MatchingDefect::Uncovered(v)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchStatus {
    Perfect,
    /// The node budget ran out; the matching is the largest seen.
    Partial,
    /// The search space was exhausted without a perfect matching.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub status: MatchStatus,
    pub matching: Matching,
    pub uncovered: VertexSet,
    pub nodes_explored: u64,
}

impl MatchResult {
    pub fn is_perfect(&self) -> bool {
        self.status == MatchStatus::Perfect
    }
}
