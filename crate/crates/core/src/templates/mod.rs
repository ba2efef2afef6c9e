//! Resilient templates and absorbing structures.
//!
//! A resilient template is a small k-graph `T` with a flexible set `Z` of size
//! `r` such that deleting fewer than `r/2` vertices of `Z` (keeping `k | v`)
//! leaves a perfect matching. The main construction lifts a searched
//! Montgomery-type bipartite graph to a k-partite k-graph and overlays a
//! k-graph without half-size independent sets on `Z`. The complete k-graph on
//! `r` vertices is offered as a second, trivially resilient kind for hosts too
//! small to hold the lifted construction.

mod lift;
mod montgomery;
mod overlay;
mod structure;

pub use lift::{lift_k_partite, LiftedTemplate, Part};
pub use montgomery::{
    search_montgomery, verify_montgomery, BipartiteTemplate, MontgomeryCheck, MontgomerySearch,
    MONTGOMERY_EXHAUSTIVE_LIMIT, MONTGOMERY_SAMPLES,
};
pub use overlay::{
    has_no_half_independent_set, independent_free_overlay, IndependenceCheck, Overlay,
    OVERLAY_EXACT_LIMIT, OVERLAY_SAMPLES,
};
pub use structure::{
    build_absorbing_structure, structure_matching_after_removal, AbsorbingStructure,
};

use crate::combin::{binom, colex_unrank};
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, Vertex, VertexSet};
use crate::matchpower::{find_perfect_matching_on, MatchStatus, DEFAULT_BUDGET};
use crate::par;
use crate::seed::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Removal sweeps with at most this many sets are run in full.
pub const RESILIENCE_EXHAUSTIVE_LIMIT: u64 = 100_000;
pub const SIDECAR_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    /// Lifted bipartite template plus overlay.
    Montgomery,
    /// The complete k-graph on `Z`.
    Complete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateParams {
    pub kind: TemplateKind,
    /// Degree cap for the bipartite search.
    pub max_degree: usize,
    pub montgomery_trials: usize,
    /// Overlay edge budget is this times `r`.
    pub overlay_edges_per_vertex: usize,
    pub overlay_trials: usize,
}

impl Default for TemplateParams {
    fn default() -> Self {
        TemplateParams {
            kind: TemplateKind::Montgomery,
            max_degree: 6,
            montgomery_trials: 400,
            overlay_edges_per_vertex: 5,
            overlay_trials: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Montgomery {
        max_degree: usize,
        bipartite_trials: usize,
        overlay_trials: usize,
        overlay_exact: bool,
    },
    Complete,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResilientTemplate {
    pub k: usize,
    pub r: usize,
    pub graph: Hypergraph,
    pub z: VertexSet,
    pub provenance: Provenance,
    /// The bipartite graph behind a Montgomery template.
    pub bipartite: Option<BipartiteTemplate>,
    /// Whether the last Z vertex of the lift was dropped (odd `r`).
    pub trimmed: bool,
}

impl ResilientTemplate {
    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// The achieved `L = max(v(T), e(T)) / r`.
    pub fn l_effective(&self) -> f64 {
        self.vertex_count().max(self.edge_count()) as f64 / self.r as f64
    }

    /// Whether removing `w` (template ids) is inside the resilience guarantee.
    pub fn removal_is_valid(&self, w: &VertexSet) -> bool {
        w.is_subset(&self.z)
            && 2 * w.len() < self.r
            && (self.vertex_count() - w.len()).is_multiple_of(self.k)
    }

    /// A perfect matching of `T - w`, built the way the resilience argument
    /// does: greedily match `Z \ w` down to `s` vertices inside the overlay,
    /// then finish with a bipartite matching lifted to special paths. Falls
    /// back to the generic oracle if the constructive route stalls.
    pub fn matching_without(&self, w: &VertexSet, budget: u64) -> Option<Vec<Vec<Vertex>>> {
        if !w.is_subset(&self.z) || !(self.vertex_count() - w.len()).is_multiple_of(self.k) {
            return None;
        }
        let rest: Vec<Vertex> = self.z.difference(w).iter().collect();
        let constructive = match (&self.provenance, &self.bipartite) {
            (Provenance::Complete, _) => {
                Some(rest.chunks(self.k).map(<[Vertex]>::to_vec).collect())
            }
            (Provenance::Montgomery { .. }, Some(b)) => self.montgomery_matching(b, rest),
            _ => None,
        };
        constructive.or_else(|| {
            let keep = VertexSet::full(self.vertex_count()).difference(w);
            let res = find_perfect_matching_on(&self.graph, &keep, budget);
            res.is_perfect().then(|| res.matching.into_edges())
        })
    }

    fn montgomery_matching(
        &self,
        b: &BipartiteTemplate,
        mut rest: Vec<Vertex>,
    ) -> Option<Vec<Vec<Vertex>>> {
        let (k, s) = (self.k, b.s);
        let off = ((k - 2) * 3 * s) as Vertex;
        let mut edges = Vec::new();
        while rest.len() > s {
            let e = self
                .graph
                .edges()
                .find(|e| e.iter().all(|v| rest.binary_search(v).is_ok()))?;
            rest.retain(|v| !e.contains(v));
            edges.push(e.to_vec());
        }
        if rest.len() != s {
            return None;
        }
        // Z vertices of the bipartite graph that the lift no longer needs
        let removed: Vec<Vertex> = b
            .z()
            .filter(|&v| rest.binary_search(&(v + off)).is_err())
            .collect();
        let pairs = b.matching_without(&removed)?;
        edges.extend(pairs.into_iter().map(|(x, w)| lift::lift_pair(k, s, x, w)));
        Some(edges)
    }

    pub fn sidecar(&self, verification: Option<ResilienceCheck>) -> TemplateSidecar {
        TemplateSidecar {
            version: SIDECAR_VERSION,
            k: self.k,
            r: self.r,
            z: self.z.as_slice().to_vec(),
            provenance: self.provenance.clone(),
            bipartite: self.bipartite.clone(),
            trimmed: self.trimmed,
            vertex_count: self.vertex_count(),
            edge_count: self.edge_count(),
            l_effective: self.l_effective(),
            verification,
        }
    }

    /// Rebuilds a template from its `.khg` graph and sidecar.
    pub fn from_parts(graph: Hypergraph, side: &TemplateSidecar) -> Result<Self> {
        if side.version != SIDECAR_VERSION {
            return Err(Error::Schema(format!(
                "template sidecar version {}",
                side.version
            )));
        }
        if graph.k() != side.k || graph.n() != side.vertex_count || side.z.len() != side.r {
            return Err(Error::Shape("sidecar does not describe this graph".into()));
        }
        Ok(ResilientTemplate {
            k: side.k,
            r: side.r,
            z: VertexSet::new(graph.n(), side.z.iter().copied())?,
            graph,
            provenance: side.provenance.clone(),
            bipartite: side.bipartite.clone(),
            trimmed: side.trimmed,
        })
    }
}

/// JSON metadata stored next to a template's `.khg` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateSidecar {
    pub version: u32,
    pub k: usize,
    pub r: usize,
    pub z: Vec<Vertex>,
    pub provenance: Provenance,
    pub bipartite: Option<BipartiteTemplate>,
    pub trimmed: bool,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub l_effective: f64,
    pub verification: Option<ResilienceCheck>,
}

/// Builds an order-`r` resilient k-graph template.
///
/// The Montgomery kind uses `s = ⌈r/2⌉`, drops one Z vertex when `r` is odd,
/// and places the overlay on the remaining `r` Z vertices in ascending order.
pub fn build_resilient_template(
    r: usize,
    k: usize,
    params: &TemplateParams,
    seed: u64,
) -> Result<ResilientTemplate> {
    if k < 2 || r < k {
        return Err(Error::Size(format!(
            "need k >= 2 and r >= k, got r = {r}, k = {k}"
        )));
    }
    match params.kind {
        TemplateKind::Complete => Ok(ResilientTemplate {
            k,
            r,
            graph: Hypergraph::complete(r, k),
            z: VertexSet::full(r),
            provenance: Provenance::Complete,
            bipartite: None,
            trimmed: false,
        }),
        TemplateKind::Montgomery => {
            let s = r.div_ceil(2);
            let found = search_montgomery(
                s,
                params.max_degree,
                params.montgomery_trials,
                derive_seed(seed, 0),
            )?;
            let lifted = lift_k_partite(&found.template, k)?;
            let trimmed = r % 2 == 1;
            let z_ids: Vec<Vertex> = lifted.z().take(r).collect();
            let n = lifted.graph.n() - usize::from(trimmed);
            let overlay = independent_free_overlay(
                r,
                k,
                params.overlay_edges_per_vertex * r,
                derive_seed(seed, 1),
                params.overlay_trials,
            )?;
            let mut edges: Vec<Vec<Vertex>> = lifted
                .graph
                .edges()
                .filter(|e| e.iter().all(|&v| (v as usize) < n))
                .map(<[Vertex]>::to_vec)
                .collect();
            edges.extend(
                overlay
                    .graph
                    .edges()
                    .map(|e| e.iter().map(|&i| z_ids[i as usize]).collect()),
            );
            Ok(ResilientTemplate {
                k,
                r,
                graph: Hypergraph::new(n, k, edges)?,
                z: VertexSet::new(n, z_ids)?,
                provenance: Provenance::Montgomery {
                    max_degree: params.max_degree,
                    bipartite_trials: found.trials_used,
                    overlay_trials: overlay.trials_used,
                    overlay_exact: overlay.exact,
                },
                bipartite: Some(found.template),
                trimmed,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ResilienceMode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResilienceCheck {
    pub holds: bool,
    /// The first removal without a perfect matching, in template ids.
    pub violating: Option<Vec<Vertex>>,
    /// Set when the first failure was a budget cut-off rather than a proof.
    pub budget_hit: bool,
    pub removals_checked: u64,
    pub exhaustive: bool,
}

/// Removal sizes inside the guarantee: `|W| < r/2` with `k | v(T) - |W|`.
pub fn feasible_removal_sizes(t: &ResilientTemplate) -> Vec<usize> {
    (0..t.r)
        .filter(|&j| 2 * j < t.r && (t.vertex_count() - j).is_multiple_of(t.k))
        .collect()
}

/// Checks every (or a sample of) admissible removal `W ⊆ Z` with the generic
/// perfect-matching oracle, independently of [`ResilientTemplate::matching_without`].
/// Removals are ordered by size, then colex rank; the first failure is reported.
pub fn verify_resilient_template(
    t: &ResilientTemplate,
    mode: ResilienceMode,
) -> Result<ResilienceCheck> {
    let sizes = feasible_removal_sizes(t);
    let z = t.z.as_slice();
    let test = |w: &[Vertex]| -> Option<(Vec<Vertex>, bool)> {
        let gone = VertexSet::new(t.vertex_count(), w.iter().copied()).expect("removal lies in Z");
        let keep = VertexSet::full(t.vertex_count()).difference(&gone);
        let res = find_perfect_matching_on(&t.graph, &keep, DEFAULT_BUDGET);
        match res.status {
            MatchStatus::Perfect => None,
            MatchStatus::Partial => Some((w.to_vec(), true)),
            MatchStatus::None => Some((w.to_vec(), false)),
        }
    };
    let pick = |idx: Vec<u32>| {
        idx.into_iter()
            .map(|i| z[i as usize])
            .collect::<Vec<Vertex>>()
    };
    let (bad, total, exhaustive) = match mode {
        ResilienceMode::Exhaustive => {
            let counts: Vec<u64> = sizes.iter().map(|&j| binom(t.r as u64, j as u64)).collect();
            let total: u64 = counts.iter().sum();
            if total > RESILIENCE_EXHAUSTIVE_LIMIT {
                return Err(Error::Capacity(format!(
                    "{total} removals exceed the exhaustive limit"
                )));
            }
            let bad = par::find_first(total as usize, |mut i| {
                let mut c = 0;
                while i as u64 >= counts[c] {
                    i -= counts[c] as usize;
                    c += 1;
                }
                test(&pick(colex_unrank(i, sizes[c])))
            });
            (bad, total, true)
        }
        ResilienceMode::Sampled { trials, seed } => {
            if sizes.is_empty() {
                (None, 0, false)
            } else {
                let bad = par::find_first(trials, |i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
                    let j = sizes[rng.gen_range(0..sizes.len())];
                    let mut w: Vec<u32> = rand::seq::index::sample(&mut rng, t.r, j)
                        .into_iter()
                        .map(|v| v as u32)
                        .collect();
                    w.sort_unstable();
                    test(&pick(w))
                });
                (bad, trials as u64, false)
            }
        }
    };
    Ok(ResilienceCheck {
        holds: bad.is_none(),
        removals_checked: bad.as_ref().map_or(total, |(i, _)| *i as u64 + 1),
        budget_hit: bad.as_ref().is_some_and(|(_, (_, b))| *b),
        violating: bad.map(|(_, (w, _))| w),
        exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r6() -> ResilientTemplate {
        let p = TemplateParams {
            max_degree: 5,
            ..TemplateParams::default()
        };
        build_resilient_template(6, 3, &p, 11).unwrap()
    }

    #[test]
    fn r6_k3_shape_and_resilience() {
        let t = r6();
        let s = 3;
        assert_eq!(t.z.len(), 6);
        assert!(t.vertex_count() <= 2 * 3 * s + 2 * s + 2 * s);
        // overlay is forced to be K_6^(3)
        let overlay = t
            .graph
            .edges()
            .filter(|e| e.iter().all(|&v| t.z.contains(v)))
            .count();
        assert_eq!(overlay, 20);
        assert!(t.edge_count() <= 100 * 4 * s + 20);
        assert_eq!(feasible_removal_sizes(&t), vec![0]);
        let c = verify_resilient_template(&t, ResilienceMode::Exhaustive).unwrap();
        assert!(c.holds && c.exhaustive);
        assert_eq!(c.removals_checked, 1);
    }

    #[test]
    fn odd_r_trims_one_z_vertex() {
        let p = TemplateParams {
            max_degree: 5,
            ..TemplateParams::default()
        };
        let t = build_resilient_template(7, 3, &p, 2).unwrap();
        assert!(t.trimmed);
        assert_eq!(t.z.len(), 7);
        assert_eq!(t.vertex_count(), 2 * 12 + 8 + 7);
        let c = verify_resilient_template(&t, ResilienceMode::Exhaustive).unwrap();
        assert!(c.holds, "{c:?}");
        assert!(c.removals_checked > 1);
    }

    #[test]
    fn constructive_matching_on_all_valid_removals() {
        let t = r6();
        let w = VertexSet::empty(t.vertex_count());
        let m = t.matching_without(&w, 1000).unwrap();
        crate::matchpower::verify_perfect_matching(&t.graph, &m).unwrap();
        let p = TemplateParams {
            max_degree: 5,
            ..TemplateParams::default()
        };
        let t = build_resilient_template(7, 3, &p, 2).unwrap();
        for j in feasible_removal_sizes(&t) {
            for idx in crate::combin::subsets(7, j) {
                let w = VertexSet::new(
                    t.vertex_count(),
                    idx.iter().map(|&i| t.z.as_slice()[i as usize]),
                )
                .unwrap();
                let m = t.matching_without(&w, 1000).unwrap();
                let kept = t
                    .graph
                    .filter_edges(|_, e| e.iter().all(|&v| !w.contains(v)));
                crate::matchpower::verify_matching(&kept, &m).unwrap();
                assert_eq!(m.len() * 3, t.vertex_count() - j);
            }
        }
    }

    #[test]
    fn complete_kind_and_sidecar() {
        let p = TemplateParams {
            kind: TemplateKind::Complete,
            ..TemplateParams::default()
        };
        let t = build_resilient_template(5, 3, &p, 0).unwrap();
        assert_eq!(t.edge_count(), 10);
        let c = verify_resilient_template(
            &t,
            ResilienceMode::Sampled {
                trials: 20,
                seed: 1,
            },
        )
        .unwrap();
        assert!(c.holds && !c.exhaustive);
        let side = t.sidecar(Some(c));
        let json = serde_json::to_string(&side).unwrap();
        let back: TemplateSidecar = serde_json::from_str(&json).unwrap();
        assert_eq!(
            ResilientTemplate::from_parts(t.graph.clone(), &back).unwrap(),
            t
        );
        let mut old = back.clone();
        old.version = 9;
        assert!(matches!(
            ResilientTemplate::from_parts(t.graph.clone(), &old),
            Err(Error::Schema(_))
        ));
    }
}
