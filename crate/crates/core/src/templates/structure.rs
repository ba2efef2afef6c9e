use super::ResilientTemplate;
use crate::absorbing::{find_rooted_absorber, Absorber, AbsorberQuery};
use crate::error::{Error, Result};
use crate::hypercore::{Host, Vertex, VertexSet};
use crate::matchpower::{verify_exact_cover, Matching, DEFAULT_BUDGET};

/// Absorbers placed on the edges of a resilient template inside a host.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbingStructure {
    pub template: ResilientTemplate,
    /// Host vertex count.
    pub n: usize,
    /// Host id of each template vertex.
    pub embedding: Vec<Vertex>,
    /// One absorber per template edge, in template edge order.
    pub placements: Vec<Absorber>,
    /// Every vertex of the structure.
    pub x: VertexSet,
    /// The flexible set, in host ids.
    pub z: VertexSet,
}

impl AbsorbingStructure {
    /// Largest absorber order used.
    pub fn max_order(&self) -> usize {
        self.placements
            .iter()
            .map(Absorber::order)
            .max()
            .unwrap_or(0)
    }

    /// Host ids of a set of template vertices.
    pub fn to_host(&self, template_vertices: impl IntoIterator<Item = Vertex>) -> Vec<Vertex> {
        template_vertices
            .into_iter()
            .map(|v| self.embedding[v as usize])
            .collect()
    }

    /// Whether two placements meet outside the roots they share through the
    /// template. Returns the first offending pair.
    pub fn overlapping_placements(&self) -> Option<(usize, usize)> {
        let mut owner: Vec<Option<usize>> = vec![None; self.n];
        let template_vertex: VertexSet =
            VertexSet::new(self.n, self.embedding.iter().copied()).expect("embedding is in range");
        for (i, a) in self.placements.iter().enumerate() {
            for v in a.vertices.iter() {
                if a.roots.contains(&v) {
                    continue;
                }
                if template_vertex.contains(v) {
                    return Some((i, i));
                }
                if let Some(j) = owner[v as usize].replace(i) {
                    return Some((j, i));
                }
            }
        }
        None
    }
}

/// Embeds a template into `host` and greedily places one absorber per
/// template edge.
///
/// Template Z vertex `i` (ascending) goes to `embed_z[i]`; the other template
/// vertices go to the lowest host ids not in `embed_z` or `finder.forbidden`.
/// Each search forbids every vertex used so far except the edge's own roots.
pub fn build_absorbing_structure<H: Host + ?Sized>(
    host: &H,
    t: &ResilientTemplate,
    embed_z: &[Vertex],
    finder: &AbsorberQuery,
) -> Result<AbsorbingStructure> {
    let n = host.vertex_count();
    if host.uniformity() != t.k {
        return Err(Error::Precondition(
            "host and template uniformities differ".into(),
        ));
    }
    let z = VertexSet::new(n, embed_z.iter().copied())?;
    if z.len() != embed_z.len() || z.len() != t.r {
        return Err(Error::Precondition(format!(
            "embedding of Z needs {} distinct host vertices",
            t.r
        )));
    }
    if !z.is_disjoint(&finder.forbidden) {
        return Err(Error::Precondition("Z meets the forbidden set".into()));
    }
    let mut embedding = vec![Vertex::MAX; t.vertex_count()];
    for (i, v) in t.z.iter().enumerate() {
        embedding[v as usize] = embed_z[i];
    }
    let mut fresh = (0..n as Vertex).filter(|&v| !z.contains(v) && !finder.forbidden.contains(v));
    for slot in embedding.iter_mut().filter(|s| **s == Vertex::MAX) {
        *slot = fresh.next().ok_or_else(|| {
            Error::Precondition(format!(
                "host has too few free vertices for a {}-vertex template",
                t.vertex_count()
            ))
        })?;
    }
    let mut used = VertexSet::new(n, embedding.iter().copied())?;
    let mut placements = Vec::with_capacity(t.edge_count());
    for (i, e) in t.graph.edges().enumerate() {
        let mut roots: Vec<Vertex> = e.iter().map(|&v| embedding[v as usize]).collect();
        roots.sort_unstable();
        let root_set = VertexSet::new(n, roots.iter().copied())?;
        let mut q = finder.clone();
        q.forbidden = finder.forbidden.union(&used.difference(&root_set));
        let a = find_rooted_absorber(host, &roots, &q).map_err(|err| Error::PlacementFailed {
            edge: i,
            detail: err.to_string(),
        })?;
        used = used.union(&a.vertices);
        placements.push(a);
    }
    Ok(AbsorbingStructure {
        template: t.clone(),
        n,
        embedding,
        placements,
        x: used,
        z,
    })
}

/// A matching of the structure covering exactly `X \ removed`, for
/// `removed ⊆ Z` of size below `r/2` with `k | |X| - |removed|`.
///
/// Takes a perfect matching `M` of the template minus `removed`, then uses the
/// covering matching of the absorber on each edge of `M` and the
/// non-covering matching elsewhere. The result is checked against the host
/// before it is returned.
pub fn structure_matching_after_removal<H: Host + ?Sized>(
    host: &H,
    s: &AbsorbingStructure,
    removed: &VertexSet,
) -> Result<Matching> {
    let t = &s.template;
    if !removed.is_subset(&s.z) {
        return Err(Error::Precondition("removed vertices must lie in Z".into()));
    }
    if 2 * removed.len() >= t.r {
        return Err(Error::Precondition(format!(
            "removing {} of r = {} Z vertices is not fewer than r/2",
            removed.len(),
            t.r
        )));
    }
    if !(s.x.len() - removed.len()).is_multiple_of(t.k) {
        return Err(Error::Precondition(
            "remaining vertex count is not divisible by k".into(),
        ));
    }
    let back: Vec<Vertex> =
        t.z.iter()
            .filter(|&v| removed.contains(s.embedding[v as usize]))
            .collect();
    let w = VertexSet::new(t.vertex_count(), back)?;
    let tm = t.matching_without(&w, DEFAULT_BUDGET).ok_or_else(|| {
        Error::TemplateMatchingFailed(format!(
            "no perfect matching of the template minus {:?}",
            w.as_slice()
        ))
    })?;
    let mut in_m = vec![false; t.edge_count()];
    for e in &tm {
        let mut e = e.clone();
        e.sort_unstable();
        let i = t.graph.edge_index(&e).ok_or_else(|| {
            Error::TemplateMatchingFailed(format!("{e:?} is not a template edge"))
        })?;
        in_m[i] = true;
    }
    let edges: Vec<Vec<Vertex>> = s
        .placements
        .iter()
        .zip(&in_m)
        .flat_map(|(a, &cov)| {
            if cov {
                a.covering.clone()
            } else {
                a.noncovering.clone()
            }
        })
        .collect();
    let target = s.x.difference(removed);
    verify_exact_cover(host, &edges, &target).map_err(|d| {
        Error::TemplateMatchingFailed(format!("assembled matching is invalid: {d}"))
    })?;
    Matching::new(s.n, t.k, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorbing::verify_absorber;
    use crate::hypercore::{CompleteHost, Hypergraph};
    use crate::templates::{build_resilient_template, TemplateKind, TemplateParams};

    fn template(r: usize) -> ResilientTemplate {
        let p = TemplateParams {
            max_degree: 5,
            ..TemplateParams::default()
        };
        build_resilient_template(r, 3, &p, 5).unwrap()
    }

    #[test]
    fn basic_shapes_in_complete_host() {
        let t = template(6);
        let n = 400;
        let host = CompleteHost { n, k: 3 };
        let mut q = AbsorberQuery::new(n, 3);
        q.min_order = 3;
        let z: Vec<Vertex> = (n as Vertex - 6..n as Vertex).collect();
        let s = build_absorbing_structure(&host, &t, &z, &q).unwrap();
        assert_eq!(s.placements.len(), t.edge_count());
        assert!(s
            .placements
            .iter()
            .all(|a| a.order() == 3 && verify_absorber(a, &host).is_ok()));
        assert_eq!(s.x.len(), t.vertex_count() + 3 * t.edge_count());
        assert_eq!(s.overlapping_placements(), None);
        let m = structure_matching_after_removal(&host, &s, &VertexSet::empty(n)).unwrap();
        assert_eq!(m.covered(), &s.x);
    }

    #[test]
    fn trivial_placements_and_removals() {
        let t = template(7);
        let host = Hypergraph::complete(t.vertex_count(), 3);
        let q = AbsorberQuery::new(host.n(), 3);
        let z: Vec<Vertex> = t.z.iter().collect();
        let s = build_absorbing_structure(&host, &t, &z, &q).unwrap();
        assert_eq!(s.max_order(), 0);
        for idx in crate::combin::subsets(7, 3) {
            let w = VertexSet::new(host.n(), idx.iter().map(|&i| z[i as usize])).unwrap();
            let m = structure_matching_after_removal(&host, &s, &w).unwrap();
            assert_eq!(m.covered(), &s.x.difference(&w));
        }
        let big = VertexSet::new(host.n(), z[..4].iter().copied()).unwrap();
        assert!(matches!(
            structure_matching_after_removal(&host, &s, &big),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn empty_host_fails_on_first_edge() {
        let p = TemplateParams {
            kind: TemplateKind::Complete,
            ..TemplateParams::default()
        };
        let t = build_resilient_template(6, 3, &p, 0).unwrap();
        let host = Hypergraph::empty(30, 3);
        let q = AbsorberQuery::new(30, 3);
        let err = build_absorbing_structure(&host, &t, &[0, 1, 2, 3, 4, 5], &q).unwrap_err();
        assert!(matches!(err, Error::PlacementFailed { edge: 0, .. }));
    }
}
