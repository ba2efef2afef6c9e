use crate::combin::{binom, colex_unrank};
use crate::error::{Error, NotFoundReason, Result};
use crate::hypercore::Vertex;
use crate::matchpower::bipartite_matching;
use crate::par;
use crate::seed::derive_seed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Removal sweeps up to this many subsets are exhaustive.
pub const MONTGOMERY_EXHAUSTIVE_LIMIT: u64 = 1_000_000;
/// Number of random removals checked above the exhaustive limit.
pub const MONTGOMERY_SAMPLES: usize = 100_000;

/// A bipartite graph between `X` (`3s` vertices) and `Y ∪ Z` (`2s` each).
///
/// Ids are fixed: `X = 0..3s`, `Y = 3s..5s`, `Z = 5s..7s`. Edges are stored as
/// `(x, w)` with `x` in `X` and `w` in `Y ∪ Z`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteTemplate {
    pub s: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    pub max_degree: usize,
}

impl BipartiteTemplate {
    pub fn new(s: usize, mut edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        if s == 0 {
            return Err(Error::Size("scale s must be positive".into()));
        }
        let (xs, total) = (3 * s as Vertex, 7 * s as Vertex);
        if let Some(e) = edges
            .iter()
            .find(|&&(x, w)| x >= xs || w < xs || w >= total)
        {
            return Err(Error::Shape(format!("{e:?} is not an X to Y∪Z pair")));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut deg = vec![0usize; 7 * s];
        for &(x, w) in &edges {
            deg[x as usize] += 1;
            deg[w as usize] += 1;
        }
        let max_degree = deg.into_iter().max().unwrap_or(0);
        Ok(BipartiteTemplate {
            s,
            edges,
            max_degree,
        })
    }

    /// Every X vertex joined to every Y∪Z vertex.
    pub fn complete(s: usize) -> Result<Self> {
        let xs = 3 * s as Vertex;
        let edges = (0..xs)
            .flat_map(|x| (xs..7 * s as Vertex).map(move |w| (x, w)))
            .collect();
        Self::new(s, edges)
    }

    pub fn x(&self) -> std::ops::Range<Vertex> {
        0..3 * self.s as Vertex
    }

    pub fn y(&self) -> std::ops::Range<Vertex> {
        3 * self.s as Vertex..5 * self.s as Vertex
    }

    pub fn z(&self) -> std::ops::Range<Vertex> {
        5 * self.s as Vertex..7 * self.s as Vertex
    }

    pub fn vertex_count(&self) -> usize {
        7 * self.s
    }

    /// Right neighbours of each X vertex, as offsets into `Y ∪ Z` (`0..4s`).
    fn right_adjacency(&self) -> Vec<Vec<usize>> {
        let xs = 3 * self.s;
        let mut adj = vec![Vec::new(); xs];
        for &(x, w) in &self.edges {
            adj[x as usize].push(w as usize - xs);
        }
        adj
    }

    /// A perfect matching of `R - removed` (`removed ⊆ Z`, size `s`) as
    /// `(x, w)` pairs, if one exists.
    pub fn matching_without(&self, removed: &[Vertex]) -> Option<Vec<(Vertex, Vertex)>> {
        let xs = 3 * self.s;
        let mut gone = vec![false; 4 * self.s];
        for &v in removed {
            gone[v as usize - xs] = true;
        }
        pm_without(&self.right_adjacency(), &gone).map(|m| {
            m.into_iter()
                .enumerate()
                .map(|(x, r)| (x as Vertex, (r + xs) as Vertex))
                .collect()
        })
    }
}

fn pm_without(adj: &[Vec<usize>], gone: &[bool]) -> Option<Vec<usize>> {
    let filtered: Vec<Vec<usize>> = adj
        .iter()
        .map(|a| a.iter().copied().filter(|&r| !gone[r]).collect())
        .collect();
    bipartite_matching(gone.len(), &filtered)
        .into_iter()
        .collect()
}

/// Outcome of a removal sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontgomeryCheck {
    pub holds: bool,
    /// The first failing removal (by colex rank when exhaustive, by sample
    /// index otherwise), as Z vertex ids.
    pub violating: Option<Vec<Vertex>>,
    pub removals_checked: u64,
    pub exhaustive: bool,
}

/// Checks that deleting any `s` vertices of `Z` leaves a perfect matching
/// between `X` and the rest of `Y ∪ Z`.
pub fn verify_montgomery(r: &BipartiteTemplate) -> MontgomeryCheck {
    let s = r.s;
    let adj = r.right_adjacency();
    let z0 = 2 * s; // Z offset inside Y ∪ Z
    let total = binom(2 * s as u64, s as u64);
    let check = |d: &[u32]| {
        let mut gone = vec![false; 4 * s];
        for &i in d {
            gone[z0 + i as usize] = true;
        }
        pm_without(&adj, &gone).is_some()
    };
    let to_ids = |d: Vec<u32>| {
        d.into_iter()
            .map(|i| (5 * s) as Vertex + i)
            .collect::<Vec<_>>()
    };
    if total <= MONTGOMERY_EXHAUSTIVE_LIMIT {
        let bad = par::find_first(total as usize, |rank| {
            let d = colex_unrank(rank, s);
            (!check(&d)).then_some(d)
        });
        MontgomeryCheck {
            holds: bad.is_none(),
            removals_checked: bad.as_ref().map_or(total, |(i, _)| *i as u64 + 1),
            violating: bad.map(|(_, d)| to_ids(d)),
            exhaustive: true,
        }
    } else {
        let bad = par::find_first(MONTGOMERY_SAMPLES, |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(s as u64, i as u64));
            let mut d: Vec<u32> = rand::seq::index::sample(&mut rng, 2 * s, s)
                .into_iter()
                .map(|v| v as u32)
                .collect();
            d.sort_unstable();
            (!check(&d)).then_some(d)
        });
        MontgomeryCheck {
            holds: bad.is_none(),
            removals_checked: bad
                .as_ref()
                .map_or(MONTGOMERY_SAMPLES as u64, |(i, _)| *i as u64 + 1),
            violating: bad.map(|(_, d)| to_ids(d)),
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontgomerySearch {
    pub template: BipartiteTemplate,
    pub check: MontgomeryCheck,
    /// Index of the successful trial plus one.
    pub trials_used: usize,
}

/// Random search for a bipartite template of maximum degree `delta` that
/// passes [`verify_montgomery`]. Trial `t` uses `derive_seed(seed, t)`; the
/// lowest passing trial wins.
pub fn search_montgomery(
    s: usize,
    delta: usize,
    trials: usize,
    seed: u64,
) -> Result<MontgomerySearch> {
    if s == 0 || delta == 0 {
        return Err(Error::Precondition(
            "search needs s >= 1 and a positive degree cap".into(),
        ));
    }
    let found = par::find_first(trials, |t| {
        let r = random_bipartite(s, delta, derive_seed(seed, t as u64));
        let check = verify_montgomery(&r);
        check.holds.then_some((r, check))
    });
    match found {
        Some((t, (template, check))) => Ok(MontgomerySearch {
            template,
            check,
            trials_used: t + 1,
        }),
        None => Err(Error::not_found(
            NotFoundReason::Budget,
            format!("no verified template with s = {s}, max degree {delta} in {trials} trials"),
        )),
    }
}

/// Each X vertex picks `delta` distinct right neighbours, one per round,
/// always among the right vertices of currently smallest degree below `delta`.
fn random_bipartite(s: usize, delta: usize, seed: u64) -> BipartiteTemplate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (xs, rs) = (3 * s, 4 * s);
    let mut rdeg = vec![0usize; rs];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); xs];
    let mut order: Vec<usize> = (0..xs).collect();
    for _ in 0..delta {
        order.shuffle(&mut rng);
        for &x in &order {
            let open = (0..rs).filter(|&w| rdeg[w] < delta && !adj[x].contains(&w));
            let Some(low) = open.clone().map(|w| rdeg[w]).min() else {
                continue;
            };
            let pool: Vec<usize> = open.filter(|&w| rdeg[w] == low).collect();
            let w = pool[rng.gen_range(0..pool.len())];
            adj[x].push(w);
            rdeg[w] += 1;
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(x, ws)| ws.iter().map(move |&w| (x as Vertex, (w + xs) as Vertex)))
        .collect();
    BipartiteTemplate::new(s, edges).expect("generated pairs are X to Y∪Z")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_passes_and_isolated_x_fails() {
        let c = BipartiteTemplate::complete(2).unwrap();
        let r = verify_montgomery(&c);
        assert!(r.holds && r.exhaustive);
        assert_eq!(r.removals_checked, 6);
        let stripped = BipartiteTemplate::new(
            2,
            c.edges.iter().copied().filter(|&(x, _)| x != 0).collect(),
        )
        .unwrap();
        let r = verify_montgomery(&stripped);
        assert!(!r.holds);
        assert_eq!(r.violating, Some(vec![10, 11]));
    }

    #[test]
    fn search_small_scales() {
        let a = search_montgomery(2, 4, 200, 1).unwrap();
        assert!(a.template.max_degree <= 4);
        assert_eq!(a.check.removals_checked, 6);
        let b = search_montgomery(3, 5, 200, 1).unwrap();
        assert!(b.template.max_degree <= 5);
        assert_eq!(b.check.removals_checked, 20);
        assert!(matches!(
            search_montgomery(2, 1, 50, 1),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn degree_cap_respected() {
        let r = random_bipartite(4, 5, 9);
        assert!(r.max_degree <= 5);
        assert!(r
            .x()
            .all(|x| r.edges.iter().filter(|e| e.0 == x).count() == 5));
    }
}
