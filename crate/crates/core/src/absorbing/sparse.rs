use super::pattern::pattern_graph;
use super::{is_k_sparse, verify_r_absorber, Absorber};
use crate::error::{Error, NotFoundReason, Result};
use crate::hypercore::{Host, Vertex, VertexSet};
use crate::matchpower::find_perfect_matching;
use crate::par;
use crate::seed::derive_seed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Parameters of [`find_sparse_r_absorber`].
#[derive(Debug, Clone)]
pub struct SparseQuery {
    /// Required girth K (after adding the root edge).
    pub big_k: usize,
    /// Pattern edge size; a multiple of k, at least the number of roots.
    pub q: usize,
    pub trials: usize,
    pub seed: u64,
    pub forbidden: VertexSet,
    /// Node budget of each perfect-matching search.
    pub pm_budget: u64,
}

impl SparseQuery {
    pub fn new(n: usize, big_k: usize, q: usize, seed: u64) -> Self {
        SparseQuery {
            big_k,
            q,
            trials: 32,
            seed,
            forbidden: VertexSet::empty(n),
            pm_budget: 200_000,
        }
    }
}

/// A K-sparse r-absorber rooted on `roots` (`rk` vertices), built on a
/// high-girth pattern.
///
/// The pattern hypergraph has one vertex per edge of a q-regular bipartite
/// graph F of girth at least K and one edge per vertex star of F; left and
/// right stars form two perfect matchings M1 and M2. The first `rk` edges at
/// right vertex 0 become the roots. The remaining pattern vertices are sent
/// injectively at random into the host, avoiding roots and forbidden
/// vertices, and each image of a pattern edge must span a perfect matching.
/// The matchings of M1 edges form the covering matching, those of M2 edges
/// the non-covering one.
pub fn find_sparse_r_absorber<H: Host + ?Sized>(
    host: &H,
    roots: &[Vertex],
    sq: &SparseQuery,
) -> Result<Absorber> {
    let k = host.uniformity();
    let n = host.vertex_count();
    if !sq.q.is_multiple_of(k) {
        return Err(Error::Precondition(format!(
            "pattern edge size {} must be divisible by k = {k}",
            sq.q
        )));
    }
    let rk = roots.len();
    if rk == 0 || !rk.is_multiple_of(k) || rk > sq.q {
        return Err(Error::Precondition(format!(
            "need a positive multiple of k roots, at most q = {}; got {rk}",
            sq.q
        )));
    }
    let mut sorted = roots.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1])
        || sorted
            .iter()
            .any(|&v| v as usize >= n || sq.forbidden.contains(v))
    {
        return Err(Error::Precondition(
            "roots must be distinct, in range and not forbidden".into(),
        ));
    }
    let f = pattern_graph(sq.q, sq.big_k, sq.seed)?;
    let left = f.left_stars();
    let right = f.right_stars();
    let z: Vec<usize> = right[0][..rk].to_vec();
    let mut slot_of_root = vec![None; f.edges.len()];
    for (i, &e) in z.iter().enumerate() {
        slot_of_root[e] = Some(i);
    }
    let free: Vec<usize> = (0..f.edges.len())
        .filter(|&e| slot_of_root[e].is_none())
        .collect();
    let pool: Vec<Vertex> = (0..n as Vertex)
        .filter(|&v| sorted.binary_search(&v).is_err() && !sq.forbidden.contains(v))
        .collect();
    if pool.len() < free.len() {
        return Err(Error::not_found(
            NotFoundReason::Exhausted,
            format!(
                "pattern needs {} free host vertices, only {} available",
                free.len(),
                pool.len()
            ),
        ));
    }
    // pattern edges: M1 (left stars), then M2 with the root slots removed
    let pattern_edges: Vec<(bool, Vec<usize>)> = left
        .iter()
        .map(|s| (true, s.clone()))
        .chain(right.iter().map(|s| {
            (
                false,
                s.iter()
                    .copied()
                    .filter(|&e| slot_of_root[e].is_none())
                    .collect(),
            )
        }))
        .collect();

    let trial = |t: usize| -> std::result::Result<Absorber, Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(sq.seed, t as u64));
        let picks = rand::seq::index::sample(&mut rng, pool.len(), free.len());
        let mut phi = vec![0 as Vertex; f.edges.len()];
        for (slot, &e) in z.iter().enumerate() {
            phi[e] = roots[slot];
        }
        for (i, &e) in free.iter().enumerate() {
            phi[e] = pool[picks.index(i)];
        }
        let mut covering = Vec::new();
        let mut noncovering = Vec::new();
        let mut failed = Vec::new();
        for (idx, (is_m1, pe)) in pattern_edges.iter().enumerate() {
            let mut image: Vec<Vertex> = pe.iter().map(|&e| phi[e]).collect();
            image.sort_unstable();
            let (sub, map) = host.induced_on(&image);
            let r = find_perfect_matching(&sub, sq.pm_budget);
            if !r.is_perfect() {
                failed.push(idx);
                continue;
            }
            let edges = r
                .matching
                .edges()
                .iter()
                .map(|e| e.iter().map(|&v| map[v as usize]).collect::<Vec<_>>());
            if *is_m1 {
                covering.extend(edges);
            } else {
                noncovering.extend(edges);
            }
        }
        if !failed.is_empty() {
            return Err(failed);
        }
        let a = Absorber::new(n, roots.to_vec(), covering, noncovering)
            .map_err(|_| vec![usize::MAX])?;
        if verify_r_absorber(&a, host).is_err() || !is_k_sparse(&a, sq.big_k).unwrap_or(false) {
            return Err(vec![usize::MAX]);
        }
        Ok(a)
    };

    let results = par::find_first(sq.trials, |t| trial(t).ok());
    if let Some((_, a)) = results {
        return Ok(a);
    }
    // report diagnostics from the first few trials
    let diag: Vec<String> = (0..sq.trials.min(4))
        .map(|t| match trial(t) {
            Err(failed) if failed.contains(&usize::MAX) => {
                format!("trial {t}: assembled object failed verification")
            }
            Err(failed) => format!("trial {t}: pattern edges {failed:?} had no perfect matching"),
            Ok(_) => format!("trial {t}: ok"),
        })
        .collect();
    Err(Error::not_found(
        NotFoundReason::Budget,
        format!("{} trials failed; {}", sq.trials, diag.join("; ")),
    ))
}
