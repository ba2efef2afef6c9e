use super::{Hypergraph, Vertex, VertexSet};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Input of the contraction `G(F, P)`: disjoint (k-1)-tuples `F` and
/// disjoint parts `U_1..U_{k-1}`, none sharing a vertex with another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionSpec {
    tuples: Vec<Vec<Vertex>>,
    parts: Vec<VertexSet>,
}

impl ContractionSpec {
    pub fn new(k: usize, tuples: Vec<Vec<Vertex>>, parts: Vec<VertexSet>) -> Result<Self> {
        if k < 2 {
            return Err(Error::Spec("contraction needs k >= 2".into()));
        }
        if parts.len() != k - 1 {
            return Err(Error::Spec(format!(
                "expected {} parts, got {}",
                k - 1,
                parts.len()
            )));
        }
        if let Some(t) = tuples.iter().find(|t| t.len() != k - 1) {
            return Err(Error::Spec(format!(
                "tuple {t:?} does not have {} entries",
                k - 1
            )));
        }
        let mut seen: Vec<Vertex> = tuples
            .iter()
            .flatten()
            .copied()
            .chain(parts.iter().flat_map(|p| p.iter()))
            .collect();
        let total = seen.len();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != total {
            return Err(Error::Spec(
                "tuples and parts must be pairwise vertex-disjoint".into(),
            ));
        }
        Ok(ContractionSpec { tuples, parts })
    }

    pub fn tuples(&self) -> &[Vec<Vertex>] {
        &self.tuples
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    /// Total size of the parts.
    pub fn part_volume(&self) -> usize {
        self.parts.iter().map(VertexSet::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContractedVertex {
    /// A vertex of some part, by its id in `G`.
    Original(Vertex),
    /// The new vertex standing for tuple `F[i]`.
    Contracted(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub graph: Hypergraph,
    /// New vertex id to what it stands for. Part vertices come first in
    /// ascending order, then one vertex per tuple in the order of `F`.
    pub vertex_map: Vec<ContractedVertex>,
    /// For each edge of `graph` (by index), the index of its preimage in `G`.
    pub edge_preimage: Vec<usize>,
}

/// `G(F, P)`.
pub fn contract(g: &Hypergraph, spec: &ContractionSpec) -> Result<Contraction> {
    let k = g.k();
    if spec.parts.len() + 1 != k {
        return Err(Error::Spec(format!(
            "spec built for k={}, graph has k={k}",
            spec.parts.len() + 1
        )));
    }
    let n = g.n();
    if spec
        .tuples
        .iter()
        .flatten()
        .chain(spec.parts.iter().flat_map(|p| p.as_slice()))
        .any(|&v| v as usize >= n)
    {
        return Err(Error::Spec(format!(
            "spec mentions a vertex outside 0..{n}"
        )));
    }
    // role of each vertex of G: part index, or (tuple, position)
    #[derive(Clone, Copy)]
    enum Role {
        None,
        Part(usize),
        Tuple(usize, usize),
    }
    let mut role = vec![Role::None; n];
    let mut u_all: Vec<Vertex> = Vec::with_capacity(spec.part_volume());
    for (j, p) in spec.parts.iter().enumerate() {
        for v in p.iter() {
            role[v as usize] = Role::Part(j);
            u_all.push(v);
        }
    }
    u_all.sort_unstable();
    for (t, tuple) in spec.tuples.iter().enumerate() {
        for (j, &v) in tuple.iter().enumerate() {
            role[v as usize] = Role::Tuple(t, j);
        }
    }
    let new_id = |v: Vertex| u_all.binary_search(&v).unwrap() as Vertex;
    let w_id = |t: usize| (u_all.len() + t) as Vertex;

    let mut out: Vec<(Vec<Vertex>, usize)> = Vec::new();
    for (idx, e) in g.edges().enumerate() {
        let mut tuple_hit: Option<(usize, usize)> = None;
        let mut parts_hit: Vec<usize> = Vec::with_capacity(k);
        let mut ok = true;
        for &v in e {
            match role[v as usize] {
                Role::None => {
                    ok = false;
                    break;
                }
                Role::Part(j) => parts_hit.push(j),
                Role::Tuple(t, j) => {
                    if tuple_hit.is_some() {
                        ok = false;
                        break;
                    }
                    tuple_hit = Some((t, j));
                }
            }
        }
        if !ok {
            continue;
        }
        match tuple_hit {
            None => {
                out.push((e.iter().map(|&v| new_id(v)).collect(), idx));
            }
            Some((t, j)) if parts_hit.iter().all(|&p| p == j) => {
                let mut ne: Vec<Vertex> = e
                    .iter()
                    .filter(|&&v| matches!(role[v as usize], Role::Part(_)))
                    .map(|&v| new_id(v))
                    .collect();
                ne.push(w_id(t));
                out.push((ne, idx));
            }
            Some(_) => {}
        }
    }
    out.sort_unstable();
    let edge_preimage = out.iter().map(|(_, i)| *i).collect();
    let flat: Vec<Vertex> = out.into_iter().flat_map(|(e, _)| e).collect();
    let mut vertex_map: Vec<ContractedVertex> = u_all
        .iter()
        .map(|&v| ContractedVertex::Original(v))
        .collect();
    vertex_map.extend((0..spec.tuples.len()).map(ContractedVertex::Contracted));
    let graph = Hypergraph::from_sorted_unchecked(vertex_map.len(), k, flat);
    Ok(Contraction {
        graph,
        vertex_map,
        edge_preimage,
    })
}
