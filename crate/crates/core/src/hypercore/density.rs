use super::flow::{FlowNetwork, INF};
use super::{Hypergraph, Vertex};
use crate::error::{Error, Result};
use crate::par;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Largest edge count handled by exhaustive subset enumeration.
pub const EXHAUSTIVE_EDGE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KDensityMode {
    /// Enumerate every edge subset; `Capacity` error above [`EXHAUSTIVE_EDGE_LIMIT`].
    Exhaustive,
    /// Exact parametric search: Dinkelbach iteration over maximum-weight
    /// closure problems solved by min cut. No size limit.
    Parametric,
    /// Exhaustive up to the limit, parametric above it.
    Auto,
}

/// `m_k(H)` with a subgraph attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDensity {
    pub value: Ratio<u64>,
    /// Edge indices (ascending) of an attaining subgraph; empty when no
    /// subgraph has more than k vertices.
    pub witness: Vec<usize>,
}

impl KDensity {
    fn none() -> Self {
        KDensity {
            value: Ratio::from_integer(0),
            witness: Vec::new(),
        }
    }
}

pub fn k_density(h: &Hypergraph, mode: KDensityMode) -> Result<KDensity> {
    let edges: Vec<&[Vertex]> = h.edges().collect();
    k_density_of_edges(h.k(), &edges, mode)
}

/// k-density of an edge list: the maximum of `(e' - 1) / (v' - k)` over
/// edge subsets spanning more than `k` vertices, or 0 if there are none.
pub fn k_density_of_edges<E: AsRef<[Vertex]> + Sync>(
    k: usize,
    edges: &[E],
    mode: KDensityMode,
) -> Result<KDensity> {
    let m = edges.len();
    if m < 2 {
        return Ok(KDensity::none());
    }
    let mode = match mode {
        KDensityMode::Auto if m <= EXHAUSTIVE_EDGE_LIMIT => KDensityMode::Exhaustive,
        KDensityMode::Auto => KDensityMode::Parametric,
        other => other,
    };
    match mode {
        KDensityMode::Exhaustive => exhaustive(k, edges),
        _ => parametric(k, edges),
    }
}

fn compact<E: AsRef<[Vertex]>>(edges: &[E]) -> (Vec<Vec<usize>>, usize) {
    let mut ids: Vec<Vertex> = edges
        .iter()
        .flat_map(|e| e.as_ref().iter().copied())
        .collect();
    ids.sort_unstable();
    ids.dedup();
    let local = edges
        .iter()
        .map(|e| {
            e.as_ref()
                .iter()
                .map(|v| ids.binary_search(v).unwrap())
                .collect()
        })
        .collect();
    (local, ids.len())
}

/// `a/b > c/d` for non-negative fractions given as (num, den).
fn greater(a: (u64, u64), c: (u64, u64)) -> bool {
    (a.0 as u128) * (c.1 as u128) > (c.0 as u128) * (a.1 as u128)
}

#[derive(Clone)]
struct Best {
    ratio: (u64, u64),
    subset: Vec<usize>,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        if greater(self.ratio, other.ratio) {
            return true;
        }
        if greater(other.ratio, self.ratio) {
            return false;
        }
        (self.subset.len(), &self.subset) < (other.subset.len(), &other.subset)
    }
}

fn exhaustive<E: AsRef<[Vertex]>>(k: usize, edges: &[E]) -> Result<KDensity> {
    let m = edges.len();
    if m > EXHAUSTIVE_EDGE_LIMIT {
        return Err(Error::Capacity(format!(
            "exhaustive k-density needs at most {EXHAUSTIVE_EDGE_LIMIT} edges, got {m}"
        )));
    }
    let (local, nv) = compact(edges);
    if nv > 128 {
        return Err(Error::Capacity(format!(
            "exhaustive k-density supports at most 128 spanned vertices, got {nv}"
        )));
    }
    let masks: Vec<u128> = local
        .iter()
        .map(|e| e.iter().fold(0u128, |acc, &v| acc | 1u128 << v))
        .collect();
    let prefix = m.min(6);
    let tasks = 1usize << prefix;
    let results = par::map_indexed(tasks, |pat| {
        let mut union = 0u128;
        let mut stack = Vec::new();
        for (j, mask) in masks.iter().enumerate().take(prefix) {
            if pat >> j & 1 == 1 {
                union |= mask;
                stack.push(j);
            }
        }
        let mut best: Option<Best> = None;
        walk(&masks, k, prefix, union, &mut stack, &mut best);
        best
    });
    let best = results
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.better_than(&a) { b } else { a });
    Ok(match best {
        Some(b) => KDensity {
            value: Ratio::new(b.ratio.0, b.ratio.1),
            witness: b.subset,
        },
        None => KDensity::none(),
    })
}

fn walk(
    masks: &[u128],
    k: usize,
    start: usize,
    union: u128,
    stack: &mut Vec<usize>,
    best: &mut Option<Best>,
) {
    let v = union.count_ones() as usize;
    if v > k {
        let ratio = ((stack.len() - 1) as u64, (v - k) as u64);
        let improves = match best {
            None => true,
            Some(b) => {
                greater(ratio, b.ratio)
                    || (!greater(b.ratio, ratio) && {
                        let mut s = stack.clone();
                        s.sort_unstable();
                        (s.len(), &s) < (b.subset.len(), &b.subset)
                    })
            }
        };
        if improves {
            let mut s = stack.clone();
            s.sort_unstable();
            *best = Some(Best { ratio, subset: s });
        }
    }
    for j in start..masks.len() {
        stack.push(j);
        walk(masks, k, j + 1, union | masks[j], stack, best);
        stack.pop();
    }
}

fn parametric<E: AsRef<[Vertex]>>(k: usize, edges: &[E]) -> Result<KDensity> {
    let (local, nv) = compact(edges);
    let m = local.len();
    let ratio_of = |subset: &[usize]| -> Option<(u64, u64)> {
        let mut vs: Vec<usize> = subset
            .iter()
            .flat_map(|&i| local[i].iter().copied())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        (vs.len() > k).then(|| ((subset.len() - 1) as u64, (vs.len() - k) as u64))
    };
    let all: Vec<usize> = (0..m).collect();
    let mut current = Best {
        ratio: ratio_of(&all).expect("two distinct edges span more than k vertices"),
        subset: all,
    };
    loop {
        let r = Ratio::new(current.ratio.0, current.ratio.1);
        let (a, b) = (*r.numer(), *r.denom());
        // closure weight b per edge, a per vertex; force each edge in turn
        let found = par::map_indexed(m, |forced| {
            let src = m + nv;
            let sink = src + 1;
            let mut net = FlowNetwork::new(m + nv + 2);
            for (i, e) in local.iter().enumerate() {
                net.add_edge(src, i, if i == forced { INF } else { b });
                for &v in e {
                    net.add_edge(i, m + v, INF);
                }
            }
            for v in 0..nv {
                net.add_edge(m + v, sink, a);
            }
            net.max_flow(src, sink);
            let side = net.source_side(src);
            let subset: Vec<usize> = (0..m).filter(|&i| side[i]).collect();
            let ratio = ratio_of(&subset)?;
            // value b(e-1) - a(v-k) > 0  <=>  ratio > a/b
            greater(ratio, (a, b)).then_some(Best { ratio, subset })
        });
        match found
            .into_iter()
            .flatten()
            .reduce(|x, y| if y.better_than(&x) { y } else { x })
        {
            Some(better) => current = better,
            None => break,
        }
    }
    // canonical witness among optimal sets is not guaranteed here; report the one found
    Ok(KDensity {
        value: Ratio::new(current.ratio.0, current.ratio.1),
        witness: current.subset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn examples() {
        let single = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(
            single.k_density(KDensityMode::Exhaustive).unwrap().value,
            Ratio::from_integer(0)
        );
        let pair = Hypergraph::new(4, 3, [[0, 1, 2], [1, 2, 3]]).unwrap();
        assert_eq!(
            pair.k_density(KDensityMode::Exhaustive).unwrap().value,
            Ratio::from_integer(1)
        );
        // x1 x2 x3 y1 y2 y3 = 0..6
        let basic = Hypergraph::new(6, 3, [[0, 1, 3], [2, 4, 5], [3, 4, 5]]).unwrap();
        let d = basic.k_density(KDensityMode::Exhaustive).unwrap();
        assert_eq!(d.value, Ratio::from_integer(1));
        let witness: Vec<&[u32]> = d.witness.iter().map(|&i| basic.edge(i)).collect();
        assert_eq!(witness, vec![&[2, 4, 5][..], &[3, 4, 5][..]]);
        assert_eq!(
            basic.k_density(KDensityMode::Parametric).unwrap().value,
            Ratio::from_integer(1)
        );
    }

    #[test]
    fn capacity_guard() {
        let h = Hypergraph::complete(7, 3); // 35 edges
        assert!(matches!(
            h.k_density(KDensityMode::Exhaustive),
            Err(Error::Capacity(_))
        ));
        // K_7^(3): densest is the whole graph, (35-1)/(7-3)
        assert_eq!(
            h.k_density(KDensityMode::Auto).unwrap().value,
            Ratio::new(34, 4)
        );
    }

    #[test]
    fn parametric_matches_exhaustive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(4..11);
            let k = rng.gen_range(2..4);
            let m = rng.gen_range(0..13);
            let edges: Vec<Vec<u32>> = (0..m)
                .map(|_| {
                    rand::seq::index::sample(&mut rng, n, k)
                        .into_iter()
                        .map(|v| v as u32)
                        .collect()
                })
                .collect();
            let h = Hypergraph::from_edges_dedup(n, k, edges).unwrap();
            let ex = h.k_density(KDensityMode::Exhaustive).unwrap();
            let pa = h.k_density(KDensityMode::Parametric).unwrap();
            assert_eq!(ex.value, pa.value, "{h:?}");
            // witnesses attain the value
            for w in [&ex.witness, &pa.witness] {
                if !w.is_empty() {
                    let sub: Vec<&[u32]> = w.iter().map(|&i| h.edge(i)).collect();
                    let mut vs: Vec<u32> = sub.iter().flat_map(|e| e.iter().copied()).collect();
                    vs.sort();
                    vs.dedup();
                    assert_eq!(
                        Ratio::new(w.len() as u64 - 1, (vs.len() - k) as u64),
                        ex.value
                    );
                }
            }
        }
    }
}
