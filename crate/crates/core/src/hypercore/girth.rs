use super::Vertex;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;

/// Length of the shortest Berge cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Acyclic,
}

impl Girth {
    /// `girth >= bound`, counting acyclic as infinite.
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= bound,
            Girth::Acyclic => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Acyclic => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

/// Berge girth of an arbitrary (possibly non-uniform, possibly repeated)
/// edge list on vertices `0..n`.
///
/// A Berge cycle of length `l` is exactly a cycle of length `2l` in the
/// vertex/edge incidence graph, so this runs a shortest-cycle BFS from every
/// node of the incidence graph. Two copies of the same edge form a 2-cycle.
pub fn berge_girth<E: AsRef<[Vertex]>>(n: usize, edges: &[E]) -> Girth {
    let m = edges.len();
    // nodes 0..n are vertices, n..n+m are edges
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n + m];
    for (i, e) in edges.iter().enumerate() {
        for &v in e.as_ref() {
            adj[v as usize].push((n + i) as u32);
            adj[n + i].push(v);
        }
    }
    let total = n + m;
    let mut best = usize::MAX;
    let mut dist = vec![u32::MAX; total];
    let mut parent = vec![u32::MAX; total];
    let mut queue = VecDeque::new();
    let mut touched = Vec::new();
    for root in n..total {
        if adj[root].is_empty() {
            continue;
        }
        for &t in &touched {
            dist[t as usize] = u32::MAX;
            parent[t as usize] = u32::MAX;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root as u32);
        queue.clear();
        queue.push_back(root as u32);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize] as usize;
            if 2 * du + 1 >= best {
                break;
            }
            for &w in &adj[u as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du as u32 + 1;
                    parent[w as usize] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u as usize] != w {
                    best = best.min(du + dist[w as usize] as usize + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        debug_assert!(best % 2 == 0);
        Girth::Finite(best / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::Hypergraph;

    /// Independent oracle: search all sequences of distinct edges with
    /// distinct connector vertices.
    fn brute_girth(edges: &[Vec<u32>]) -> Girth {
        fn extend(
            edges: &[Vec<u32>],
            seq: &mut Vec<usize>,
            conn: &mut Vec<u32>,
            len: usize,
        ) -> bool {
            let last = *seq.last().unwrap();
            if seq.len() == len {
                let first = seq[0];
                return edges[last]
                    .iter()
                    .any(|v| edges[first].contains(v) && !conn.contains(v));
            }
            for next in 0..edges.len() {
                if seq.contains(&next) || next < seq[0] {
                    continue;
                }
                for &v in &edges[last] {
                    if edges[next].contains(&v) && !conn.contains(&v) {
                        seq.push(next);
                        conn.push(v);
                        if extend(edges, seq, conn, len) {
                            return true;
                        }
                        seq.pop();
                        conn.pop();
                    }
                }
            }
            false
        }
        for len in 2..=edges.len() {
            for start in 0..edges.len() {
                if extend(edges, &mut vec![start], &mut Vec::new(), len) {
                    return Girth::Finite(len);
                }
            }
        }
        Girth::Acyclic
    }

    #[test]
    fn examples() {
        let tree = Hypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        assert_eq!(tree.girth(), Girth::Acyclic);
        let two = Hypergraph::new(4, 3, [[0, 1, 2], [1, 2, 3]]).unwrap();
        assert_eq!(two.girth(), Girth::Finite(2));
        let tri = Hypergraph::new(6, 3, [[0, 1, 2], [2, 3, 4], [4, 5, 0]]).unwrap();
        assert_eq!(tri.girth(), Girth::Finite(3));
        assert_eq!(brute_girth(&tri.edge_list()), Girth::Finite(3));
        // repeated edge is a 2-cycle
        assert_eq!(
            berge_girth(3, &[vec![0, 1, 2], vec![0, 1, 2]]),
            Girth::Finite(2)
        );
        // non-uniform
        assert_eq!(
            berge_girth(6, &[vec![0, 1], vec![1, 2, 3], vec![3, 4, 5, 0]]),
            Girth::Finite(3)
        );
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(4..10);
            let m = rng.gen_range(1..7);
            let edges: Vec<Vec<u32>> = (0..m)
                .map(|_| {
                    let mut e: Vec<u32> = rand::seq::index::sample(&mut rng, n, 3)
                        .into_iter()
                        .map(|v| v as u32)
                        .collect();
                    e.sort();
                    e
                })
                .collect();
            assert_eq!(berge_girth(n, &edges), brute_girth(&edges), "{edges:?}");
        }
    }
}
