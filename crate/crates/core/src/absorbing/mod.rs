//! Absorbers and r-absorbers: verification, K-sparsity, bounded rooted
//! search, contractible assembly and contraction, and the pattern-based
//! sparse r-absorber construction.

mod contractible;
mod pattern;
mod search;
mod sparse;

pub use contractible::{
    assemble_contractible, contract_absorber, contracted_absorber_decomposition, grid_absorber,
    ContractedAbsorber, ContractibleAbsorber,
};
pub use pattern::{bipartite_girth, pattern_graph, BipartitePattern};
pub use search::{find_rooted_absorber, AbsorberQuery};
pub use sparse::{find_sparse_r_absorber, SparseQuery};

use crate::error::{Error, Result};
use crate::hypercore::{berge_girth, Girth, Host, Vertex, VertexSet};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, Write};

/// An absorber rooted on `roots` (k of them), or an r-absorber when there
/// are `rk` roots. The covering matching covers `vertices`; the
/// non-covering matching covers `vertices` minus the roots; the two share no
/// edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Absorber {
    pub roots: Vec<Vertex>,
    pub vertices: VertexSet,
    pub covering: Vec<Vec<Vertex>>,
    pub noncovering: Vec<Vec<Vertex>>,
}

impl Absorber {
    /// Builds an absorber whose vertex set is the union of `covering`.
    /// Edges are sorted; nothing else is checked.
    pub fn new(
        n: usize,
        roots: Vec<Vertex>,
        covering: Vec<Vec<Vertex>>,
        noncovering: Vec<Vec<Vertex>>,
    ) -> Result<Self> {
        let sort = |mut m: Vec<Vec<Vertex>>| {
            m.iter_mut().for_each(|e| e.sort_unstable());
            m.sort_unstable();
            m
        };
        let covering = sort(covering);
        let vertices = VertexSet::new(n, covering.iter().flatten().copied())?;
        Ok(Absorber {
            roots,
            vertices,
            covering,
            noncovering: sort(noncovering),
        })
    }

    /// The single-edge absorber on `roots`.
    pub fn trivial(n: usize, roots: Vec<Vertex>) -> Result<Self> {
        Absorber::new(n, roots.clone(), vec![roots], Vec::new())
    }

    pub fn order(&self) -> usize {
        self.vertices.len().saturating_sub(self.roots.len())
    }

    /// All edges, covering first.
    pub fn edges(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.covering.iter().chain(self.noncovering.iter())
    }

    pub fn edge_count(&self) -> usize {
        self.covering.len() + self.noncovering.len()
    }

    /// Applies `map` (old id -> new id) to every vertex.
    pub fn relabel(&self, n: usize, map: impl Fn(Vertex) -> Vertex) -> Result<Absorber> {
        let m = |es: &[Vec<Vertex>]| {
            es.iter()
                .map(|e| e.iter().map(|&v| map(v)).collect())
                .collect()
        };
        Absorber::new(
            n,
            self.roots.iter().map(|&v| map(v)).collect(),
            m(&self.covering),
            m(&self.noncovering),
        )
    }
}

/// Why a candidate fails to be an absorber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbsorberDefect {
    RootCount { found: usize, k: usize },
    RepeatedRoot(Vertex),
    RootOutside(Vertex),
    EdgeSize(Vec<Vertex>),
    NotInHost(Vec<Vertex>),
    CoveringOverlap(Vertex),
    CoveringMisses(Vertex),
    CoveringStrays(Vertex),
    NoncoveringOverlap(Vertex),
    NoncoveringMisses(Vertex),
    NoncoveringTouchesRoot(Vertex),
    NoncoveringStrays(Vertex),
    SharedEdge(Vec<Vertex>),
}

impl fmt::Display for AbsorberDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AbsorberDefect::*;
        match self {
            RootCount { found, k } => {
                write!(f, "{found} roots is not a positive multiple of k = {k}")
            }
            RepeatedRoot(v) => write!(f, "root {v} repeated"),
            RootOutside(v) => write!(f, "root {v} is not a vertex of the absorber"),
            EdgeSize(e) => write!(f, "edge {e:?} has the wrong size or repeats a vertex"),
            NotInHost(e) => write!(f, "edge {e:?} is not an edge of the host"),
            CoveringOverlap(v) => write!(f, "vertex {v} lies in two covering edges"),
            CoveringMisses(v) => write!(f, "covering matching misses vertex {v}"),
            CoveringStrays(v) => write!(f, "covering edge uses vertex {v} outside the vertex set"),
            NoncoveringOverlap(v) => write!(f, "vertex {v} lies in two non-covering edges"),
            NoncoveringMisses(v) => write!(f, "non-covering matching misses vertex {v}"),
            NoncoveringTouchesRoot(v) => write!(f, "non-covering matching covers root {v}"),
            NoncoveringStrays(v) => write!(
                f,
                "non-covering edge uses vertex {v} outside the vertex set"
            ),
            SharedEdge(e) => write!(f, "edge {e:?} is in both matchings"),
        }
    }
}

/// Checks the absorber axioms for `a` as an absorber with exactly `k` roots.
pub fn verify_absorber<H: Host + ?Sized>(a: &Absorber, host: &H) -> Result<(), AbsorberDefect> {
    let k = host.uniformity();
    if a.roots.len() != k {
        return Err(AbsorberDefect::RootCount {
            found: a.roots.len(),
            k,
        });
    }
    verify_r_absorber(a, host)
}

/// Checks the r-absorber axioms: `rk` distinct roots, a covering matching of
/// the vertex set and an edge-disjoint matching of everything but the roots,
/// all edges in `host`.
pub fn verify_r_absorber<H: Host + ?Sized>(a: &Absorber, host: &H) -> Result<(), AbsorberDefect> {
    verify_structure(a, host.uniformity())?;
    for e in a.edges() {
        if !host.has_edge(e) {
            return Err(AbsorberDefect::NotInHost(e.clone()));
        }
    }
    Ok(())
}

/// The absorber axioms without reference to a host.
pub fn verify_structure(a: &Absorber, k: usize) -> Result<(), AbsorberDefect> {
    use AbsorberDefect::*;
    if a.roots.is_empty() || !a.roots.len().is_multiple_of(k) {
        return Err(RootCount {
            found: a.roots.len(),
            k,
        });
    }
    let n = a.vertices.capacity();
    let mut is_root = vec![false; n];
    for &x in &a.roots {
        if x as usize >= n || !a.vertices.contains(x) {
            return Err(RootOutside(x));
        }
        if std::mem::replace(&mut is_root[x as usize], true) {
            return Err(RepeatedRoot(x));
        }
    }
    for e in a.edges() {
        if e.len() != k || e.windows(2).any(|w| w[0] >= w[1]) || e.iter().any(|&v| v as usize >= n)
        {
            return Err(EdgeSize(e.clone()));
        }
    }
    let mut seen = vec![false; n];
    for &v in a.covering.iter().flatten() {
        if !a.vertices.contains(v) {
            return Err(CoveringStrays(v));
        }
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(CoveringOverlap(v));
        }
    }
    if let Some(v) = a.vertices.iter().find(|&v| !seen[v as usize]) {
        return Err(CoveringMisses(v));
    }
    let mut seen = vec![false; n];
    for &v in a.noncovering.iter().flatten() {
        if !a.vertices.contains(v) {
            return Err(NoncoveringStrays(v));
        }
        if is_root[v as usize] {
            return Err(NoncoveringTouchesRoot(v));
        }
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(NoncoveringOverlap(v));
        }
    }
    if let Some(v) = a
        .vertices
        .iter()
        .find(|&v| !is_root[v as usize] && !seen[v as usize])
    {
        return Err(NoncoveringMisses(v));
    }
    if let Some(e) = a.covering.iter().find(|e| a.noncovering.contains(e)) {
        return Err(SharedEdge(e.clone()));
    }
    Ok(())
}

/// Girth at least `big_k` after adding the root set as one more edge. A root
/// set that is already an edge makes a repeated edge, i.e. a 2-cycle.
pub fn is_k_sparse(a: &Absorber, big_k: usize) -> Result<bool> {
    let mut roots = a.roots.clone();
    roots.sort_unstable();
    if roots.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Size("absorber roots are not distinct".into()));
    }
    let mut edges: Vec<&[Vertex]> = a.edges().map(Vec::as_slice).collect();
    edges.push(&roots);
    let n = a
        .vertices
        .capacity()
        .max(roots.last().map_or(0, |&v| v as usize + 1));
    Ok(berge_girth(n, &edges).at_least(big_k))
}

/// Girth of the absorber's own edges (without the root edge).
pub fn absorber_girth(a: &Absorber) -> Girth {
    let edges: Vec<&[Vertex]> = a.edges().map(Vec::as_slice).collect();
    berge_girth(a.vertices.capacity(), &edges)
}

/// One line of the absorber JSON-lines format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorberRecord {
    pub n: usize,
    pub roots: Vec<Vertex>,
    pub covering: Vec<Vec<Vertex>>,
    pub noncovering: Vec<Vec<Vertex>>,
    pub order: usize,
    /// The K for which the absorber was checked K-sparse, if any.
    pub sparsity_k: Option<usize>,
}

impl AbsorberRecord {
    pub fn from_absorber(a: &Absorber, sparsity_k: Option<usize>) -> Self {
        AbsorberRecord {
            n: a.vertices.capacity(),
            roots: a.roots.clone(),
            covering: a.covering.clone(),
            noncovering: a.noncovering.clone(),
            order: a.order(),
            sparsity_k,
        }
    }

    pub fn to_absorber(&self) -> Result<Absorber> {
        Absorber::new(
            self.n,
            self.roots.clone(),
            self.covering.clone(),
            self.noncovering.clone(),
        )
    }
}

pub fn write_jsonl<W: Write>(records: &[AbsorberRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<AbsorberRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::parse(i + 1, e.to_string()))?);
    }
    Ok(out)
}
