//! q-regular bipartite pattern graphs of prescribed girth.

use crate::error::{Error, NotFoundReason, Result};
use crate::matchpower::bipartite_matching;
use crate::seed::derive_seed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

/// A q-regular bipartite graph with `m` vertices on each side. Edges are
/// `(left, right)` pairs in ascending order; an edge's index is its
/// position in `edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitePattern {
    pub q: usize,
    pub m: usize,
    pub edges: Vec<(u32, u32)>,
}

impl BipartitePattern {
    fn from_adjacency(q: usize, adj: &[Vec<usize>]) -> Self {
        let mut edges: Vec<(u32, u32)> = adj
            .iter()
            .enumerate()
            .flat_map(|(l, rs)| rs.iter().map(move |&r| (l as u32, r as u32)))
            .collect();
        edges.sort_unstable();
        BipartitePattern {
            q,
            m: adj.len(),
            edges,
        }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.m];
        for &(l, r) in &self.edges {
            adj[l as usize].push(r as usize);
        }
        adj
    }

    /// Indices of the edges at each left vertex.
    pub fn left_stars(&self) -> Vec<Vec<usize>> {
        let mut s = vec![Vec::new(); self.m];
        for (i, &(l, _)) in self.edges.iter().enumerate() {
            s[l as usize].push(i);
        }
        s
    }

    /// Indices of the edges at each right vertex.
    pub fn right_stars(&self) -> Vec<Vec<usize>> {
        let mut s = vec![Vec::new(); self.m];
        for (i, &(_, r)) in self.edges.iter().enumerate() {
            s[r as usize].push(i);
        }
        s
    }

    pub fn is_regular(&self) -> bool {
        self.left_stars()
            .iter()
            .chain(self.right_stars().iter())
            .all(|s| s.len() == self.q)
    }

    pub fn complete(q: usize) -> Self {
        let adj: Vec<Vec<usize>> = (0..q).map(|_| (0..q).collect()).collect();
        Self::from_adjacency(q, &adj)
    }

    /// Point-line incidence graph of the projective plane over `F_p`
    /// (`p` prime): `(p+1)`-regular with girth 6.
    pub fn projective_plane(p: usize) -> Self {
        let mut pts: Vec<[usize; 3]> = Vec::new();
        for a in 0..p {
            for b in 0..p {
                pts.push([1, a, b]);
            }
        }
        for a in 0..p {
            pts.push([0, 1, a]);
        }
        pts.push([0, 0, 1]);
        let adj: Vec<Vec<usize>> = pts
            .iter()
            .map(|x| {
                (0..pts.len())
                    .filter(|&j| {
                        (x[0] * pts[j][0] + x[1] * pts[j][1] + x[2] * pts[j][2]).is_multiple_of(p)
                    })
                    .collect()
            })
            .collect();
        Self::from_adjacency(p + 1, &adj)
    }

    /// Removes perfect matchings until the graph is `q`-regular.
    pub fn peel_to(&self, q: usize) -> Result<Self> {
        if q > self.q {
            return Err(Error::Precondition(format!(
                "cannot peel a {}-regular graph up to degree {q}",
                self.q
            )));
        }
        let mut adj = self.adjacency();
        for _ in q..self.q {
            let pm = bipartite_matching(self.m, &adj);
            for (l, r) in pm.iter().enumerate() {
                let r = r.expect("regular bipartite graphs have perfect matchings");
                adj[l].retain(|&x| x != r);
            }
        }
        Ok(Self::from_adjacency(q, &adj))
    }

    /// Progressive edge growth: each new edge at a left vertex goes to a
    /// right vertex with spare degree that is as far away as possible.
    fn peg(q: usize, m: usize, rng: &mut ChaCha8Rng) -> Option<Self> {
        let mut adj_l: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut adj_r: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);
        for _round in 0..q {
            for &l in &order {
                let dist = right_distances(l, &adj_l, &adj_r);
                let mut cands: Vec<usize> = (0..m)
                    .filter(|&r| adj_r[r].len() < q && !adj_l[l].contains(&r))
                    .collect();
                if cands.is_empty() {
                    return None;
                }
                let far = cands.iter().map(|&r| dist[r]).max().unwrap();
                cands.retain(|&r| dist[r] == far);
                let low = cands.iter().map(|&r| adj_r[r].len()).min().unwrap();
                cands.retain(|&r| adj_r[r].len() == low);
                let r = *cands.choose(rng).unwrap();
                adj_l[l].push(r);
                adj_r[r].push(l);
            }
        }
        Some(Self::from_adjacency(q, &adj_l))
    }
}

/// BFS distances from left vertex `l` to every right vertex (`usize::MAX`
/// when unreachable).
fn right_distances(l: usize, adj_l: &[Vec<usize>], adj_r: &[Vec<usize>]) -> Vec<usize> {
    let m = adj_l.len();
    let mut dl = vec![usize::MAX; m];
    let mut dr = vec![usize::MAX; m];
    dl[l] = 0;
    let mut queue = VecDeque::from([(true, l)]);
    while let Some((left, v)) = queue.pop_front() {
        if left {
            for &r in &adj_l[v] {
                if dr[r] == usize::MAX {
                    dr[r] = dl[v] + 1;
                    queue.push_back((false, r));
                }
            }
        } else {
            for &u in &adj_r[v] {
                if dl[u] == usize::MAX {
                    dl[u] = dr[v] + 1;
                    queue.push_back((true, u));
                }
            }
        }
    }
    dr
}

/// Girth of the pattern as a simple graph; `None` if it is a forest.
pub fn bipartite_girth(p: &BipartitePattern) -> Option<usize> {
    let n = 2 * p.m;
    let mut adj = vec![Vec::new(); n];
    for &(l, r) in &p.edges {
        adj[l as usize].push(p.m + r as usize);
        adj[p.m + r as usize].push(l as usize);
    }
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let c = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

fn smallest_prime_at_least(x: usize) -> usize {
    (x.max(2)..)
        .find(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .unwrap()
}

/// Fewest vertices per side of a `q`-regular bipartite graph with girth at
/// least `2t` (Moore bound).
fn moore_bound(q: usize, girth: usize) -> usize {
    let t = girth.div_ceil(2);
    (0..t).map(|i| (q - 1).pow(i as u32)).sum()
}

/// A `q`-regular bipartite graph with girth at least `big_k`:
/// `K_{q,q}` for `big_k <= 4`, a peeled projective plane for `big_k <= 6`,
/// otherwise a randomised progressive-edge-growth search with the girth
/// checked exactly.
pub fn pattern_graph(q: usize, big_k: usize, seed: u64) -> Result<BipartitePattern> {
    if q == 0 {
        return Err(Error::Precondition(
            "pattern degree must be positive".into(),
        ));
    }
    if q == 1 {
        return Ok(BipartitePattern::complete(1));
    }
    if big_k <= 4 {
        return Ok(BipartitePattern::complete(q));
    }
    if big_k <= 6 {
        return BipartitePattern::projective_plane(smallest_prime_at_least(q - 1)).peel_to(q);
    }
    let even_k = big_k + big_k % 2;
    let lo = moore_bound(q, even_k);
    let mut m = lo;
    let mut attempt = 0u64;
    while m <= 64 * lo {
        for _ in 0..24 {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, attempt));
            attempt += 1;
            if let Some(p) = BipartitePattern::peg(q, m, &mut rng) {
                if bipartite_girth(&p).is_none_or(|g| g >= big_k) {
                    return Ok(p);
                }
            }
        }
        m += (m / 8).max(1);
    }
    Err(Error::not_found(
        NotFoundReason::Budget,
        format!("no {q}-regular bipartite graph of girth >= {big_k} found"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructions() {
        let k33 = BipartitePattern::complete(3);
        assert!(k33.is_regular());
        assert_eq!(bipartite_girth(&k33), Some(4));
        let fano = BipartitePattern::projective_plane(2);
        assert_eq!((fano.m, fano.q), (7, 3));
        assert!(fano.is_regular());
        assert_eq!(bipartite_girth(&fano), Some(6));
        let pg5 = BipartitePattern::projective_plane(5).peel_to(3).unwrap();
        assert!(pg5.is_regular() && pg5.q == 3);
        assert!(bipartite_girth(&pg5).unwrap() >= 6);
    }

    #[test]
    fn requested_girths() {
        for (q, big_k) in [(3, 4), (3, 6), (6, 6), (3, 8), (3, 10)] {
            let p = pattern_graph(q, big_k, 1).unwrap();
            assert!(p.is_regular(), "q={q} K={big_k}");
            assert!(
                bipartite_girth(&p).is_none_or(|g| g >= big_k),
                "q={q} K={big_k}"
            );
        }
        assert_eq!(moore_bound(3, 8), 15);
    }
}
