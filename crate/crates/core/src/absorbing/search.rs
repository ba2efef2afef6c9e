use super::{is_k_sparse, verify_absorber, Absorber};
use crate::error::{Error, NotFoundReason, Result};
use crate::hypercore::{Host, Vertex, VertexSet};
use std::collections::HashMap;

/// Parameters of [`find_rooted_absorber`].
#[derive(Debug, Clone)]
pub struct AbsorberQuery {
    /// Largest order (non-root vertex count) to try.
    pub max_order: usize,
    /// Smallest order to accept; 0 allows the single-edge absorber.
    pub min_order: usize,
    pub forbidden: VertexSet,
    /// Also require K-sparsity for this K.
    pub require_sparse: Option<usize>,
    /// Search node budget across all orders.
    pub budget: u64,
}

impl AbsorberQuery {
    pub fn new(n: usize, max_order: usize) -> Self {
        AbsorberQuery {
            max_order,
            min_order: 0,
            forbidden: VertexSet::empty(n),
            require_sparse: None,
            budget: 1_000_000,
        }
    }
}

/// Finds an absorber rooted on `roots` with order at most `q.max_order`,
/// trying orders 0, k, 2k, ... in turn.
///
/// The search grows a vertex set from the roots. While some vertex lacks a
/// covering edge, it branches on the edges through the first such vertex
/// (roots first); after that it does the same for the non-covering matching.
/// Edges may bring in new vertices as long as the order bound allows.
pub fn find_rooted_absorber<H: Host + ?Sized>(
    host: &H,
    roots: &[Vertex],
    q: &AbsorberQuery,
) -> Result<Absorber> {
    let n = host.vertex_count();
    let k = host.uniformity();
    if roots.len() != k {
        return Err(Error::Precondition(format!(
            "expected {k} roots, got {}",
            roots.len()
        )));
    }
    let mut sorted = roots.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.iter().any(|&v| v as usize >= n) {
        return Err(Error::Precondition(
            "roots must be distinct vertices".into(),
        ));
    }
    if roots.iter().any(|&x| q.forbidden.contains(x)) {
        return Err(Error::Precondition("roots meet the forbidden set".into()));
    }
    let mut s = State::new(host, roots, q);
    let start = q.min_order.div_ceil(k) * k;
    let mut budget_hit = false;
    for order in (start..=q.max_order).step_by(k) {
        s.max_vertices = k + order;
        match s.dfs() {
            Step::Found => {
                let a = Absorber::new(n, roots.to_vec(), s.c_edges.clone(), s.n_edges.clone())?;
                verify_absorber(&a, host).map_err(|d| {
                    Error::Precondition(format!("search produced an invalid absorber: {d}"))
                })?;
                return Ok(a);
            }
            Step::Fail => {}
            Step::Budget => {
                budget_hit = true;
                break;
            }
        }
    }
    let reason = if budget_hit {
        NotFoundReason::Budget
    } else {
        NotFoundReason::Exhausted
    };
    Err(Error::not_found(
        reason,
        format!(
            "no absorber of order <= {} rooted on {roots:?}",
            q.max_order
        ),
    ))
}

enum Step {
    Found,
    Fail,
    Budget,
}

struct State<'a, H: Host + ?Sized> {
    host: &'a H,
    k: usize,
    roots: Vec<Vertex>,
    blocked: Vec<bool>,
    is_root: Vec<bool>,
    in_v: Vec<bool>,
    v_list: Vec<Vertex>,
    c_cov: Vec<bool>,
    n_cov: Vec<bool>,
    c_edges: Vec<Vec<Vertex>>,
    n_edges: Vec<Vec<Vertex>>,
    cache: HashMap<Vertex, Vec<Vec<Vertex>>>,
    max_vertices: usize,
    min_order: usize,
    sparse: Option<usize>,
    nodes: u64,
    budget: u64,
}

impl<'a, H: Host + ?Sized> State<'a, H> {
    fn new(host: &'a H, roots: &[Vertex], q: &AbsorberQuery) -> Self {
        let n = host.vertex_count();
        let mut is_root = vec![false; n];
        let mut in_v = vec![false; n];
        for &x in roots {
            is_root[x as usize] = true;
            in_v[x as usize] = true;
        }
        let mut blocked = vec![false; n];
        q.forbidden
            .iter()
            .filter(|&v| (v as usize) < n)
            .for_each(|v| blocked[v as usize] = true);
        State {
            host,
            k: host.uniformity(),
            roots: roots.to_vec(),
            blocked,
            is_root,
            in_v,
            v_list: roots.to_vec(),
            c_cov: vec![false; n],
            n_cov: vec![false; n],
            c_edges: Vec::new(),
            n_edges: Vec::new(),
            cache: HashMap::new(),
            max_vertices: 0,
            min_order: q.min_order,
            sparse: q.require_sparse,
            nodes: 0,
            budget: q.budget,
        }
    }

    fn edges_at(&mut self, v: Vertex) -> Vec<Vec<Vertex>> {
        let host = self.host;
        self.cache
            .entry(v)
            .or_insert_with(|| host.edges_containing(v))
            .clone()
    }

    fn dfs(&mut self) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::Budget;
        }
        if let Some(v) = self
            .v_list
            .iter()
            .copied()
            .find(|&v| !self.c_cov[v as usize])
        {
            return self.branch(v, true);
        }
        if let Some(v) = self
            .v_list
            .iter()
            .copied()
            .find(|&v| !self.is_root[v as usize] && !self.n_cov[v as usize])
        {
            return self.branch(v, false);
        }
        let order = self.v_list.len() - self.k;
        if order < self.min_order {
            return Step::Fail;
        }
        if let Some(big_k) = self.sparse {
            let n = self.host.vertex_count();
            let ok = Absorber::new(
                n,
                self.roots.clone(),
                self.c_edges.clone(),
                self.n_edges.clone(),
            )
            .and_then(|a| is_k_sparse(&a, big_k))
            .unwrap_or(false);
            if !ok {
                return Step::Fail;
            }
        }
        Step::Found
    }

    fn branch(&mut self, v: Vertex, covering: bool) -> Step {
        for e in self.edges_at(v) {
            let mut fresh = 0;
            let mut ok = true;
            for &u in &e {
                let u = u as usize;
                let taken = if covering {
                    self.c_cov[u]
                } else {
                    self.n_cov[u] || self.is_root[u]
                };
                if self.blocked[u] || taken {
                    ok = false;
                    break;
                }
                if !self.in_v[u] {
                    fresh += 1;
                }
            }
            let other = if covering {
                &self.n_edges
            } else {
                &self.c_edges
            };
            if !ok || self.v_list.len() + fresh > self.max_vertices || other.contains(&e) {
                continue;
            }
            let added: Vec<Vertex> = e
                .iter()
                .copied()
                .filter(|&u| !self.in_v[u as usize])
                .collect();
            for &u in &added {
                self.in_v[u as usize] = true;
                self.v_list.push(u);
            }
            let cov = if covering {
                &mut self.c_cov
            } else {
                &mut self.n_cov
            };
            e.iter().for_each(|&u| cov[u as usize] = true);
            if covering {
                self.c_edges.push(e.clone());
            } else {
                self.n_edges.push(e.clone());
            }
            let r = self.dfs();
            if let Step::Found = r {
                return r;
            }
            if covering {
                self.c_edges.pop();
            } else {
                self.n_edges.pop();
            }
            let cov = if covering {
                &mut self.c_cov
            } else {
                &mut self.n_cov
            };
            e.iter().for_each(|&u| cov[u as usize] = false);
            for &u in &added {
                self.in_v[u as usize] = false;
                self.v_list.pop();
            }
            if let Step::Budget = r {
                return r;
            }
        }
        Step::Fail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::{CompleteHost, Hypergraph};

    #[test]
    fn complete_host_gives_basic_shape() {
        let host = CompleteHost { n: 12, k: 3 };
        let mut q = AbsorberQuery::new(12, 6);
        q.min_order = 1;
        let a = find_rooted_absorber(&host, &[4, 7, 9], &q).unwrap();
        assert_eq!(a.order(), 3);
        assert_eq!(a.covering.len(), 2);
        assert_eq!(a.noncovering.len(), 1);
        // the trivial absorber when allowed
        let a = find_rooted_absorber(&host, &[4, 7, 9], &AbsorberQuery::new(12, 6)).unwrap();
        assert_eq!(a.order(), 0);
    }

    #[test]
    fn empty_and_single_edge() {
        let empty = Hypergraph::empty(9, 3);
        assert!(matches!(
            find_rooted_absorber(&empty, &[0, 1, 2], &AbsorberQuery::new(9, 6)),
            Err(Error::NotFound {
                reason: NotFoundReason::Exhausted,
                ..
            })
        ));
        let one = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let a = find_rooted_absorber(&one, &[0, 1, 2], &AbsorberQuery::new(3, 0)).unwrap();
        assert_eq!(a, Absorber::trivial(3, vec![0, 1, 2]).unwrap());
    }

    #[test]
    fn forbidden_and_sparse() {
        let host = CompleteHost { n: 15, k: 3 };
        let mut q = AbsorberQuery::new(15, 9);
        q.forbidden = VertexSet::new(15, [3, 4, 5]).unwrap();
        q.require_sparse = Some(3);
        let a = find_rooted_absorber(&host, &[0, 1, 2], &q).unwrap();
        assert!(a.vertices.is_disjoint(&q.forbidden));
        assert!(is_k_sparse(&a, 3).unwrap());
        assert!(matches!(
            find_rooted_absorber(&host, &[0, 1, 3], &q),
            Err(Error::Precondition(_))
        ));
    }
}
