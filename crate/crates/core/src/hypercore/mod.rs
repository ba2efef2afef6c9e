//! The k-uniform hypergraph carrier and its structural functionals.

mod contract;
mod density;
mod flow;
mod girth;
pub mod khg;

pub use contract::{contract, ContractedVertex, Contraction, ContractionSpec};
pub use density::{k_density, k_density_of_edges, KDensity, KDensityMode, EXHAUSTIVE_EDGE_LIMIT};
pub use girth::{berge_girth, Girth};

use crate::combin::{self, binom};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Vertex = u32;

/// A set of vertex ids drawn from `0..capacity`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    members: Vec<Vertex>,
    capacity: usize,
}

impl VertexSet {
    pub fn new(capacity: usize, members: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut members: Vec<Vertex> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.last() {
            if v as usize >= capacity {
                return Err(Error::Size(format!("vertex {v} outside 0..{capacity}")));
            }
        }
        Ok(VertexSet { members, capacity })
    }

    pub fn empty(capacity: usize) -> Self {
        VertexSet {
            members: Vec::new(),
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        VertexSet {
            members: (0..capacity as Vertex).collect(),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        sorted_disjoint(&self.members, &other.members)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        sorted_subset(&self.members, &other.members)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut m = self.members.clone();
        m.extend_from_slice(&other.members);
        m.sort_unstable();
        m.dedup();
        VertexSet {
            members: m,
            capacity: self.capacity.max(other.capacity),
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&v| !other.contains(v))
            .collect();
        VertexSet {
            members,
            capacity: self.capacity,
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&v| other.contains(v))
            .collect();
        VertexSet {
            members,
            capacity: self.capacity,
        }
    }

    /// Vertices of `0..capacity` not in the set.
    pub fn complement(&self) -> VertexSet {
        let members = (0..self.capacity as Vertex)
            .filter(|&v| !self.contains(v))
            .collect();
        VertexSet {
            members,
            capacity: self.capacity,
        }
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

pub(crate) fn sorted_disjoint(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Anything that can answer edge-membership queries for a k-graph.
///
/// [`Hypergraph`] is the usual host; [`CompleteHost`] stands in for `K_n^(k)`
/// without materialising its edges.
pub trait Host: Sync {
    fn vertex_count(&self) -> usize;
    fn uniformity(&self) -> usize;
    /// `edge` must be sorted.
    fn has_edge(&self, edge: &[Vertex]) -> bool;

    /// Induced subgraph on `vertices` (sorted, distinct), relabelled to
    /// `0..len` in ascending order; the map sends new ids to old ids.
    fn induced_on(&self, vertices: &[Vertex]) -> (Hypergraph, Vec<Vertex>) {
        let k = self.uniformity();
        let edges: Vec<Vec<Vertex>> = combin::subsets(vertices.len(), k)
            .filter(|idx| {
                let e: Vec<Vertex> = idx.iter().map(|&i| vertices[i as usize]).collect();
                self.has_edge(&e)
            })
            .collect();
        let h = Hypergraph::from_sorted_unchecked(vertices.len(), k, edges.concat());
        (h, vertices.to_vec())
    }

    /// Edges through `v`, each sorted, in lexicographic order.
    fn edges_containing(&self, v: Vertex) -> Vec<Vec<Vertex>> {
        let k = self.uniformity();
        let others: Vec<Vertex> = (0..self.vertex_count() as Vertex)
            .filter(|&u| u != v)
            .collect();
        let mut out: Vec<Vec<Vertex>> = combin::subsets_of(&others, k - 1)
            .filter_map(|mut f| {
                f.push(v);
                f.sort_unstable();
                self.has_edge(&f).then_some(f)
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// The complete k-graph on `n` vertices, answered implicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteHost {
    pub n: usize,
    pub k: usize,
}

impl Host for CompleteHost {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn uniformity(&self) -> usize {
        self.k
    }
    fn has_edge(&self, edge: &[Vertex]) -> bool {
        edge.len() == self.k
            && edge.windows(2).all(|w| w[0] < w[1])
            && edge.last().is_none_or(|&v| (v as usize) < self.n)
    }
}

/// Minimum d-degree with a d-set attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinDegree {
    pub value: u64,
    pub witness: Vec<Vertex>,
}

/// A k-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored sorted, deduplicated and in lexicographic order in one
/// flat buffer of stride `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    flat: Vec<Vertex>,
}

impl Hypergraph {
    /// Builds a hypergraph, normalising vertex order inside each edge and the
    /// edge order. Rejects out-of-range or repeated vertices and duplicate edges.
    pub fn new<E, I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        E: AsRef<[Vertex]>,
        I: IntoIterator<Item = E>,
    {
        Self::build(n, k, edges, false)
    }

    /// Like [`Hypergraph::new`] but silently drops duplicate edges.
    pub fn from_edges_dedup<E, I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        E: AsRef<[Vertex]>,
        I: IntoIterator<Item = E>,
    {
        Self::build(n, k, edges, true)
    }

    fn build<E, I>(n: usize, k: usize, edges: I, dedup: bool) -> Result<Self>
    where
        E: AsRef<[Vertex]>,
        I: IntoIterator<Item = E>,
    {
        if k == 0 {
            return Err(Error::Size("uniformity must be at least 1".into()));
        }
        let mut list: Vec<Vec<Vertex>> = Vec::new();
        for e in edges {
            let mut e = e.as_ref().to_vec();
            if e.len() != k {
                return Err(Error::Size(format!(
                    "edge {e:?} does not have {k} vertices"
                )));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Size(format!("edge {e:?} repeats a vertex")));
            }
            if e[k - 1] as usize >= n {
                return Err(Error::Size(format!(
                    "edge {e:?} leaves vertex range 0..{n}"
                )));
            }
            list.push(e);
        }
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        if !dedup && list.len() != before {
            return Err(Error::Size("duplicate edge".into()));
        }
        Ok(Hypergraph {
            n,
            k,
            flat: list.concat(),
        })
    }

    /// `flat` must already be normalised (sorted edges in lexicographic order).
    pub(crate) fn from_sorted_unchecked(n: usize, k: usize, flat: Vec<Vertex>) -> Self {
        debug_assert!(flat.len().is_multiple_of(k));
        debug_assert!(flat
            .chunks_exact(k)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[0] < w[1]));
        Hypergraph { n, k, flat }
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Hypergraph {
            n,
            k,
            flat: Vec::new(),
        }
    }

    /// `K_n^(k)`.
    pub fn complete(n: usize, k: usize) -> Self {
        Hypergraph {
            n,
            k,
            flat: combin::subsets(n, k).flatten().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.flat.len() / self.k
    }

    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.flat[i * self.k..(i + 1) * self.k]
    }

    pub fn edges(&self) -> std::slice::ChunksExact<'_, Vertex> {
        self.flat.chunks_exact(self.k)
    }

    pub fn edge_list(&self) -> Vec<Vec<Vertex>> {
        self.edges().map(|e| e.to_vec()).collect()
    }

    /// Position of `edge` (sorted) in the canonical edge order.
    pub fn edge_index(&self, edge: &[Vertex]) -> Option<usize> {
        if edge.len() != self.k {
            return None;
        }
        let (mut lo, mut hi) = (0, self.edge_count());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(edge) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains_edge(&self, edge: &[Vertex]) -> bool {
        self.edge_index(edge).is_some()
    }

    /// For each vertex, the indices of the edges containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges().enumerate() {
            for &v in e {
                inc[v as usize].push(i);
            }
        }
        inc
    }

    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &v in &self.flat {
            deg[v as usize] += 1;
        }
        deg
    }

    /// Number of edges containing `s`.
    pub fn degree(&self, s: &VertexSet) -> Result<u64> {
        if s.len() >= self.k {
            return Err(Error::Size(format!(
                "degree of a {}-set in a {}-graph",
                s.len(),
                self.k
            )));
        }
        Ok(self
            .edges()
            .filter(|e| sorted_subset(s.as_slice(), e))
            .count() as u64)
    }

    /// Degree of every d-set, indexed by colexicographic rank.
    pub fn degree_profile(&self, d: usize) -> Result<Vec<u64>> {
        if d == 0 || d >= self.k {
            return Err(Error::Size(format!("d = {d} outside 1..{}", self.k)));
        }
        if d > self.n {
            return Err(Error::Size(format!("d = {d} exceeds n = {}", self.n)));
        }
        let mut deg = vec![0u64; binom(self.n as u64, d as u64) as usize];
        for e in self.edges() {
            combin::for_each_subset_of(e, d, |s| deg[combin::colex_rank(s)] += 1);
        }
        Ok(deg)
    }

    /// Minimum d-degree `δ_d(H)` and a d-set attaining it.
    pub fn min_d_degree(&self, d: usize) -> Result<MinDegree> {
        let deg = self.degree_profile(d)?;
        let (rank, &value) = deg
            .iter()
            .enumerate()
            .min_by_key(|&(i, &v)| (v, i))
            .ok_or_else(|| Error::Size("no d-sets".into()))?;
        Ok(MinDegree {
            value,
            witness: combin::colex_unrank(rank, d),
        })
    }

    /// Subgraph induced on `s`, relabelled ascending; `map[new] = old`.
    pub fn induced(&self, s: &VertexSet) -> (Hypergraph, Vec<Vertex>) {
        self.induced_on(s.as_slice())
    }

    /// The link `(k - |s|)`-graph of `s`, on the same vertex ids.
    pub fn link(&self, s: &VertexSet) -> Result<Hypergraph> {
        if s.len() >= self.k {
            return Err(Error::Size(format!(
                "link of a {}-set in a {}-graph",
                s.len(),
                self.k
            )));
        }
        let kk = self.k - s.len();
        let mut flat = Vec::new();
        for e in self.edges() {
            if sorted_subset(s.as_slice(), e) {
                flat.extend(e.iter().copied().filter(|&v| !s.contains(v)));
            }
        }
        // removing a common subset keeps lexicographic order
        Ok(Hypergraph::from_sorted_unchecked(self.n, kk, flat))
    }

    /// No two edges share more than one vertex.
    pub fn is_linear(&self) -> bool {
        let inc = self.incidence();
        for (i, e) in self.edges().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for &v in e {
                for &j in &inc[v as usize] {
                    if j != i && !seen.insert(j) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn girth(&self) -> Girth {
        let edges: Vec<&[Vertex]> = self.edges().collect();
        berge_girth(self.n, &edges)
    }

    pub fn k_density(&self, mode: KDensityMode) -> Result<KDensity> {
        k_density(self, mode)
    }

    /// Same vertex set, edges filtered by `keep(index, edge)`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, &[Vertex]) -> bool) -> Hypergraph {
        let mut flat = Vec::new();
        for (i, e) in self.edges().enumerate() {
            if keep(i, e) {
                flat.extend_from_slice(e);
            }
        }
        Hypergraph::from_sorted_unchecked(self.n, self.k, flat)
    }

    /// Edge union with another k-graph on the same vertex count.
    pub fn union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.k != other.k {
            return Err(Error::Size(
                "union of hypergraphs with different uniformity".into(),
            ));
        }
        Hypergraph::from_edges_dedup(
            self.n.max(other.n),
            self.k,
            self.edges().chain(other.edges()),
        )
    }

    /// Applies `perm` (old id -> new id) to every vertex.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return Err(Error::Size("permutation length differs from n".into()));
        }
        Hypergraph::new(
            self.n,
            self.k,
            self.edges()
                .map(|e| e.iter().map(|&v| perm[v as usize]).collect::<Vec<_>>()),
        )
    }

    /// Vertices with at least one incident edge.
    pub fn support(&self) -> VertexSet {
        VertexSet::new(self.n, self.flat.iter().copied()).expect("edges stay in range")
    }
}

impl Host for Hypergraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn uniformity(&self) -> usize {
        self.k
    }
    fn has_edge(&self, edge: &[Vertex]) -> bool {
        self.contains_edge(edge)
    }
    fn induced_on(&self, vertices: &[Vertex]) -> (Hypergraph, Vec<Vertex>) {
        let mut local = vec![u32::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as Vertex;
        }
        let sub_edges = binom(vertices.len() as u64, self.k as u64);
        let mut flat = Vec::new();
        if sub_edges < self.edge_count() as u64 / 4 {
            for idx in combin::subsets(vertices.len(), self.k) {
                let e: Vec<Vertex> = idx.iter().map(|&i| vertices[i as usize]).collect();
                if self.contains_edge(&e) {
                    flat.extend(idx);
                }
            }
        } else {
            for e in self.edges() {
                if e.iter().all(|&v| local[v as usize] != u32::MAX) {
                    flat.extend(e.iter().map(|&v| local[v as usize]));
                }
            }
        }
        // ascending relabelling preserves lexicographic order
        (
            Hypergraph::from_sorted_unchecked(vertices.len(), self.k, flat),
            vertices.to_vec(),
        )
    }
    fn edges_containing(&self, v: Vertex) -> Vec<Vec<Vertex>> {
        self.edges()
            .filter(|e| e.binary_search(&v).is_ok())
            .map(<[Vertex]>::to_vec)
            .collect()
    }
}
