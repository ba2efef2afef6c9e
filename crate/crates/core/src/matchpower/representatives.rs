use super::search::matching_of_size;
use super::Matching;
use crate::error::{Error, NotFoundReason, Result};
use crate::hypercore::{Hypergraph, Vertex, VertexSet};
use crate::par;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest number of links the exact Aharoni–Haxell sweep accepts.
pub const AH_EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AhMode {
    /// Every nonempty index set.
    Exact,
    /// `samples` random nonempty index sets; a pass is evidence only.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AhReport {
    pub holds: bool,
    /// The first index set (ascending link indices) whose union has no
    /// matching of size greater than `k'(|I| - 1)`.
    pub violating: Option<Vec<usize>>,
    pub subsets_checked: usize,
    /// True when every index set was checked.
    pub exhaustive: bool,
}

/// Tests the Aharoni–Haxell condition: for every nonempty `I`, the union of
/// the `L_i` with `i ∈ I` has a matching of size more than `k'(|I| - 1)`.
pub fn aharoni_haxell_holds(
    links: &[Hypergraph],
    kp: usize,
    mode: AhMode,
    budget: u64,
) -> Result<AhReport> {
    let t = links.len();
    if let Some(l) = links.iter().find(|l| l.k() != kp) {
        return Err(Error::Shape(format!(
            "link is {}-uniform, expected {kp}",
            l.k()
        )));
    }
    let n = links.iter().map(Hypergraph::n).max().unwrap_or(0);
    let check = |set: &[usize]| -> Result<bool> {
        let union =
            Hypergraph::from_edges_dedup(n, kp, set.iter().flat_map(|&i| links[i].edges()))?;
        let need = kp * (set.len() - 1) + 1;
        let m = matching_of_size(&union, need, budget);
        if !m.optimal {
            return Err(Error::not_found(
                NotFoundReason::Budget,
                format!("matching search on index set {set:?}"),
            ));
        }
        Ok(m.matching.len() >= need)
    };
    let sets: Vec<Vec<usize>> = match mode {
        AhMode::Exact => {
            if t > AH_EXACT_LIMIT {
                return Err(Error::Capacity(format!(
                    "exact Aharoni–Haxell check needs t <= {AH_EXACT_LIMIT}, got {t}"
                )));
            }
            (1u32..1 << t)
                .map(|mask| (0..t).filter(|&i| mask >> i & 1 == 1).collect())
                .collect()
        }
        AhMode::Sampled { samples, seed } => {
            if t == 0 {
                Vec::new()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..samples)
                    .map(|_| loop {
                        let s: Vec<usize> = (0..t).filter(|_| rng.gen_bool(0.5)).collect();
                        if !s.is_empty() {
                            break s;
                        }
                    })
                    .collect()
            }
        }
    };
    let outcome = par::find_first(sets.len(), |i| match check(&sets[i]) {
        Ok(true) => None,
        Ok(false) => Some(Ok(())),
        Err(e) => Some(Err(e)),
    });
    let exhaustive = matches!(mode, AhMode::Exact);
    match outcome {
        None => Ok(AhReport {
            holds: true,
            violating: None,
            subsets_checked: sets.len(),
            exhaustive,
        }),
        Some((_, Err(e))) => Err(e),
        Some((i, Ok(()))) => Ok(AhReport {
            holds: false,
            violating: Some(sets[i].clone()),
            subsets_checked: i + 1,
            exhaustive,
        }),
    }
}

/// Pairwise vertex-disjoint edges `g(i) ∈ L_i`, one per link, by
/// fail-first backtracking.
pub fn find_disjoint_representatives(
    links: &[Hypergraph],
    budget: u64,
) -> Result<Vec<Vec<Vertex>>> {
    let n = links.iter().map(Hypergraph::n).max().unwrap_or(0);
    let mut search = Sdr {
        links,
        used: vec![false; n],
        pick: vec![None; links.len()],
        nodes: 0,
        budget,
    };
    match search.run() {
        Some(true) => Ok(search
            .pick
            .into_iter()
            .map(|p| links_edge(links, p))
            .collect::<Option<Vec<_>>>()
            .unwrap()),
        Some(false) => Err(Error::not_found(
            NotFoundReason::Exhausted,
            "no system of disjoint representatives",
        )),
        None => Err(Error::not_found(
            NotFoundReason::Budget,
            "disjoint representative search hit its node budget",
        )),
    }
}

fn links_edge(links: &[Hypergraph], p: Option<(usize, usize)>) -> Option<Vec<Vertex>> {
    p.map(|(i, e)| links[i].edge(e).to_vec())
}

struct Sdr<'a> {
    links: &'a [Hypergraph],
    used: Vec<bool>,
    pick: Vec<Option<(usize, usize)>>,
    nodes: u64,
    budget: u64,
}

impl Sdr<'_> {
    fn free_edges(&self, i: usize) -> Vec<usize> {
        self.links[i]
            .edges()
            .enumerate()
            .filter(|(_, e)| e.iter().all(|&v| !self.used[v as usize]))
            .map(|(j, _)| j)
            .collect()
    }

    /// `Some(found)`, or `None` on budget exhaustion.
    fn run(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for i in (0..self.links.len()).filter(|&i| self.pick[i].is_none()) {
            let free = self.free_edges(i);
            if best.as_ref().is_none_or(|(_, b)| free.len() < b.len()) {
                let empty = free.is_empty();
                best = Some((i, free));
                if empty {
                    break;
                }
            }
        }
        let Some((i, free)) = best else {
            return Some(true);
        };
        for e in free {
            let edge = self.links[i].edge(e);
            edge.iter().for_each(|&v| self.used[v as usize] = true);
            self.pick[i] = Some((i, e));
            match self.run() {
                Some(false) => {}
                other => return other,
            }
            self.pick[i] = None;
            let edge = self.links[i].edge(e);
            edge.iter().for_each(|&v| self.used[v as usize] = false);
        }
        Some(false)
    }
}

/// A matching with one edge per vertex of `w`, each made of that vertex and
/// `k - 1` vertices of `z`. Edges come back in the order of `w`'s members.
pub fn match_into_flexible(
    g: &Hypergraph,
    w: &VertexSet,
    z: &VertexSet,
    budget: u64,
) -> Result<Matching> {
    if !w.is_disjoint(z) {
        return Err(Error::Precondition("W and Z must be disjoint".into()));
    }
    let k = g.k();
    if z.len() < (k - 1) * w.len() {
        return Err(Error::not_found(
            NotFoundReason::Exhausted,
            format!(
                "|Z| = {} is smaller than (k-1)|W| = {}",
                z.len(),
                (k - 1) * w.len()
            ),
        ));
    }
    let links: Vec<Hypergraph> = w
        .iter()
        .map(|x| {
            let l = g.link(&VertexSet::new(g.n(), [x])?)?;
            Ok(l.filter_edges(|_, f| f.iter().all(|&v| z.contains(v))))
        })
        .collect::<Result<_>>()?;
    let reps = find_disjoint_representatives(&links, budget)?;
    let edges = w.iter().zip(reps).map(|(x, mut f)| {
        f.push(x);
        f
    });
    Matching::new(g.n(), k, edges)
}
