use super::{verify_structure, Absorber};
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, Vertex, VertexSet};
use serde::{Deserialize, Serialize};

/// The k x k grid absorber: roots `y_1..y_k` on top of `k - 1` rows. The
/// covering matching is the columns, the non-covering matching the rows.
/// `rows[i][j]` sits under root `j`.
pub fn grid_absorber(n: usize, roots: &[Vertex], rows: &[Vec<Vertex>]) -> Result<Absorber> {
    let k = roots.len();
    if rows.len() + 1 != k || rows.iter().any(|r| r.len() != k) {
        return Err(Error::Shape(format!(
            "a grid absorber needs {} rows of {k} vertices",
            k.saturating_sub(1)
        )));
    }
    let columns = (0..k)
        .map(|j| {
            std::iter::once(roots[j])
                .chain(rows.iter().map(|r| r[j]))
                .collect()
        })
        .collect();
    let a = Absorber::new(n, roots.to_vec(), columns, rows.to_vec())?;
    verify_structure(&a, k).map_err(|d| Error::Shape(d.to_string()))?;
    Ok(a)
}

/// Rooted edges `e_i = (x_i, y_i^1, .., y_i^{k-1})` plus sub-absorbers `H_j`
/// rooted on `(y_1^j, .., y_k^j)`, and the absorber they form together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractibleAbsorber {
    pub roots: Vec<Vertex>,
    /// `rooted_edges[i][0] = roots[i]`; position `j >= 1` holds `y_i^j`.
    pub rooted_edges: Vec<Vec<Vertex>>,
    pub subabsorbers: Vec<Absorber>,
    pub assembled: Absorber,
}

/// Checks the shape constraints and assembles: covering = rooted edges plus
/// the sub-absorbers' non-covering matchings, non-covering = the
/// sub-absorbers' covering matchings.
pub fn assemble_contractible(
    n: usize,
    roots: &[Vertex],
    rooted_edges: &[Vec<Vertex>],
    subabsorbers: &[Absorber],
) -> Result<ContractibleAbsorber> {
    let k = roots.len();
    let shape = |msg: String| Err(Error::Shape(msg));
    if k < 2 {
        return shape("contractible absorbers need k >= 2".into());
    }
    if rooted_edges.len() != k {
        return shape(format!(
            "expected {k} rooted edges, got {}",
            rooted_edges.len()
        ));
    }
    for (i, e) in rooted_edges.iter().enumerate() {
        if e.len() != k || e[0] != roots[i] {
            return shape(format!(
                "rooted edge {i} must list root {} first and have {k} vertices",
                roots[i]
            ));
        }
    }
    let mut used = vec![false; n];
    for &v in rooted_edges.iter().flatten() {
        if v as usize >= n || std::mem::replace(&mut used[v as usize], true) {
            return shape(format!(
                "rooted edges are not pairwise disjoint (vertex {v})"
            ));
        }
    }
    if subabsorbers.len() != k - 1 {
        return shape(format!(
            "expected {} sub-absorbers, got {}",
            k - 1,
            subabsorbers.len()
        ));
    }
    for (j, h) in subabsorbers.iter().enumerate() {
        let want: Vec<Vertex> = rooted_edges.iter().map(|e| e[j + 1]).collect();
        if h.roots != want {
            return shape(format!(
                "sub-absorber {j} must be rooted on {want:?}, found {:?}",
                h.roots
            ));
        }
        verify_structure(h, k).map_err(|d| Error::Shape(format!("sub-absorber {j}: {d}")))?;
        for v in h.vertices.iter().filter(|v| !h.roots.contains(v)) {
            if v as usize >= n || std::mem::replace(&mut used[v as usize], true) {
                return shape(format!(
                    "sub-absorber {j} is not externally vertex-disjoint (vertex {v})"
                ));
            }
        }
    }
    let covering = rooted_edges.iter().cloned().chain(
        subabsorbers
            .iter()
            .flat_map(|h| h.noncovering.iter().cloned()),
    );
    let noncovering = subabsorbers.iter().flat_map(|h| h.covering.iter().cloned());
    let assembled = Absorber::new(n, roots.to_vec(), covering.collect(), noncovering.collect())?;
    verify_structure(&assembled, k)
        .map_err(|d| Error::Shape(format!("assembled absorber: {d}")))?;
    Ok(ContractibleAbsorber {
        roots: roots.to_vec(),
        rooted_edges: rooted_edges.to_vec(),
        subabsorbers: subabsorbers.to_vec(),
        assembled,
    })
}

/// A contracted absorber on fresh ids: the roots `w_1..w_k` are `0..k`, the
/// other vertices follow in ascending order of their original ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractedAbsorber {
    pub k: usize,
    pub edges: Vec<Vec<Vertex>>,
    /// New id to original id; a root maps to the root `x_i` of its rooted edge.
    pub vertex_map: Vec<Vertex>,
    /// The sub-absorbers, relabelled, each rooted on `(0, .., k-1)`.
    pub subabsorbers: Vec<Absorber>,
}

impl ContractedAbsorber {
    pub fn roots(&self) -> Vec<Vertex> {
        (0..self.k as Vertex).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_map.len()
    }

    /// Sub-absorbers may share an edge only through the roots, so the union
    /// is a simple k-graph unless two of them repeat a k-set of roots.
    pub fn graph(&self) -> Result<Hypergraph> {
        Hypergraph::from_edges_dedup(self.vertex_count(), self.k, &self.edges)
    }
}

/// Collapses each rooted edge `e_i` to a single vertex `w_i`: every `y_i^j`
/// becomes `w_i`, the rooted edges disappear.
pub fn contract_absorber(c: &ContractibleAbsorber) -> ContractedAbsorber {
    let k = c.roots.len();
    let n = c.assembled.vertices.capacity();
    let mut target: Vec<Option<Vertex>> = vec![None; n];
    for (i, e) in c.rooted_edges.iter().enumerate() {
        for &y in &e[1..] {
            target[y as usize] = Some(i as Vertex);
        }
    }
    let mut vertex_map: Vec<Vertex> = c.roots.clone();
    let mut rest: Vec<Vertex> = c
        .subabsorbers
        .iter()
        .flat_map(|h| h.vertices.iter())
        .filter(|&v| target[v as usize].is_none())
        .collect();
    rest.sort_unstable();
    rest.dedup();
    for (i, &v) in rest.iter().enumerate() {
        target[v as usize] = Some((k + i) as Vertex);
    }
    vertex_map.extend(&rest);
    let total = vertex_map.len();
    let subabsorbers: Vec<Absorber> = c
        .subabsorbers
        .iter()
        .map(|h| {
            h.relabel(total, |v| {
                target[v as usize].expect("every sub-absorber vertex is mapped")
            })
        })
        .collect::<Result<_>>()
        .expect("relabelled ids are below the new vertex count");
    let mut edges: Vec<Vec<Vertex>> = subabsorbers
        .iter()
        .flat_map(|h| h.edges().cloned())
        .collect();
    edges.sort_unstable();
    ContractedAbsorber {
        k,
        edges,
        vertex_map,
        subabsorbers,
    }
}

/// Looks for a split of the contracted absorber's vertex set into a covering
/// perfect matching and an edge-disjoint perfect matching of the non-roots,
/// using only its own edges. Returns the split if one exists.
pub fn contracted_absorber_decomposition(c: &ContractedAbsorber) -> Option<Absorber> {
    let g = c.graph().ok()?;
    let n = g.n();
    let roots = c.roots();
    let all: Vec<Vec<Vertex>> = g.edge_list();
    let mut found = None;
    each_perfect_matching(&all, &VertexSet::full(n), &mut |cover| {
        let rest: Vec<Vec<Vertex>> = all
            .iter()
            .filter(|e| !cover.contains(e) && e.iter().all(|&v| v as usize >= c.k))
            .cloned()
            .collect();
        let target = VertexSet::new(n, (c.k as Vertex)..n as Vertex).unwrap();
        let mut inner = None;
        each_perfect_matching(&rest, &target, &mut |non| {
            inner = Some(non.to_vec());
            true
        });
        if let Some(non) = inner {
            found = Absorber::new(n, roots.clone(), cover.to_vec(), non).ok();
            return true;
        }
        false
    });
    found
}

/// Calls `f` on every perfect matching of `target` using `edges`, until it
/// returns true.
fn each_perfect_matching(
    edges: &[Vec<Vertex>],
    target: &VertexSet,
    f: &mut dyn FnMut(&[Vec<Vertex>]) -> bool,
) {
    fn rec(
        edges: &[Vec<Vertex>],
        target: &VertexSet,
        used: &mut Vec<bool>,
        chosen: &mut Vec<Vec<Vertex>>,
        f: &mut dyn FnMut(&[Vec<Vertex>]) -> bool,
    ) -> bool {
        let Some(v) = target.iter().find(|&v| !used[v as usize]) else {
            return f(chosen);
        };
        for e in edges {
            if e.contains(&v) && e.iter().all(|&u| target.contains(u) && !used[u as usize]) {
                e.iter().for_each(|&u| used[u as usize] = true);
                chosen.push(e.clone());
                let stop = rec(edges, target, used, chosen, f);
                chosen.pop();
                e.iter().for_each(|&u| used[u as usize] = false);
                if stop {
                    return true;
                }
            }
        }
        false
    }
    let mut used = vec![false; target.capacity()];
    rec(edges, target, &mut used, &mut Vec::new(), f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorbing::verify_absorber;
    use crate::hypercore::{contract, CompleteHost, ContractedVertex, ContractionSpec};

    /// Roots 0,1,2; rooted edges (0,3,4), (1,5,6), (2,7,8); y^1 = (3,5,7),
    /// y^2 = (4,6,8).
    fn rooted() -> Vec<Vec<Vertex>> {
        vec![vec![0, 3, 4], vec![1, 5, 6], vec![2, 7, 8]]
    }

    fn two_grid() -> ContractibleAbsorber {
        let h1 = grid_absorber(21, &[3, 5, 7], &[vec![9, 10, 11], vec![12, 13, 14]]).unwrap();
        let h2 = grid_absorber(21, &[4, 6, 8], &[vec![15, 16, 17], vec![18, 19, 20]]).unwrap();
        assemble_contractible(21, &[0, 1, 2], &rooted(), &[h1, h2]).unwrap()
    }

    #[test]
    fn two_grid_shape() {
        let c = two_grid();
        assert_eq!(c.assembled.vertices.len(), 21);
        assert_eq!(c.assembled.order(), 18);
        assert_eq!(
            verify_absorber(&c.assembled, &CompleteHost { n: 21, k: 3 }),
            Ok(())
        );
        let w = contract_absorber(&c);
        assert_eq!(w.vertex_count(), 21 - 6);
        assert_eq!(w.edges.len(), 10);
        for h in &w.subabsorbers {
            assert_eq!(h.roots, vec![0, 1, 2]);
            assert_eq!(verify_absorber(h, &CompleteHost { n: 15, k: 3 }), Ok(()));
        }
        // the two sub-absorbers meet exactly in the roots
        assert_eq!(
            w.subabsorbers[0]
                .vertices
                .intersection(&w.subabsorbers[1].vertices)
                .as_slice(),
            &[0, 1, 2]
        );
    }

    #[test]
    fn small_subabsorbers_give_order_12() {
        let h1 = Absorber::new(
            15,
            vec![3, 5, 7],
            vec![vec![3, 5, 9], vec![7, 10, 11]],
            vec![vec![9, 10, 11]],
        )
        .unwrap();
        let h2 = Absorber::new(
            15,
            vec![4, 6, 8],
            vec![vec![4, 6, 12], vec![8, 13, 14]],
            vec![vec![12, 13, 14]],
        )
        .unwrap();
        let c = assemble_contractible(15, &[0, 1, 2], &rooted(), &[h1, h2]).unwrap();
        assert_eq!(c.assembled.order(), 12);
        assert_eq!(contract_absorber(&c).vertex_count(), 15 - 6);
    }

    #[test]
    fn shape_errors() {
        let c = two_grid();
        let mut bad = rooted();
        bad[1][1] = 3;
        assert!(matches!(
            assemble_contractible(21, &[0, 1, 2], &bad, &c.subabsorbers),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            assemble_contractible(21, &[0, 1, 2], &rooted(), &c.subabsorbers[..1]),
            Err(Error::Shape(_))
        ));
        let clash = c.subabsorbers[1]
            .relabel(21, |v| if v == 15 { 9 } else { v })
            .unwrap();
        assert!(matches!(
            assemble_contractible(
                21,
                &[0, 1, 2],
                &rooted(),
                &[c.subabsorbers[0].clone(), clash]
            ),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn k2_degenerate() {
        // roots 0,1; rooted edges {0,2}, {1,3}; one sub-absorber rooted on (2,3)
        let h = grid_absorber(6, &[2, 3], &[vec![4, 5]]).unwrap();
        let c = assemble_contractible(6, &[0, 1], &[vec![0, 2], vec![1, 3]], &[h]).unwrap();
        assert_eq!(
            verify_absorber(&c.assembled, &CompleteHost { n: 6, k: 2 }),
            Ok(())
        );
        let w = contract_absorber(&c);
        // one sub-absorber: the contracted object is that absorber itself
        assert_eq!(
            verify_absorber(&w.subabsorbers[0], &w.graph().unwrap()),
            Ok(())
        );
        assert!(contracted_absorber_decomposition(&w).is_some());
    }

    #[test]
    fn agrees_with_general_contraction() {
        let c = two_grid();
        let g = Hypergraph::new(21, 3, c.assembled.edges()).unwrap();
        let tuples: Vec<Vec<Vertex>> = c.rooted_edges.iter().map(|e| e[1..].to_vec()).collect();
        let parts: Vec<VertexSet> = c
            .subabsorbers
            .iter()
            .map(|h| {
                VertexSet::new(21, h.vertices.iter().filter(|v| !h.roots.contains(v))).unwrap()
            })
            .collect();
        let general = contract(&g, &ContractionSpec::new(3, tuples, parts).unwrap()).unwrap();
        let direct = contract_absorber(&c);
        // compare in original labels: roots by index, others by old id
        let label_general = |v: Vertex| match general.vertex_map[v as usize] {
            ContractedVertex::Original(o) => (1, o),
            ContractedVertex::Contracted(i) => (0, i as Vertex),
        };
        let label_direct = |v: Vertex| {
            if (v as usize) < 3 {
                (0, v)
            } else {
                (1, direct.vertex_map[v as usize])
            }
        };
        let norm = |es: Vec<Vec<(u32, Vertex)>>| {
            let mut es: Vec<Vec<(u32, Vertex)>> = es
                .into_iter()
                .map(|mut e| {
                    e.sort();
                    e
                })
                .collect();
            es.sort();
            es
        };
        let a = norm(
            general
                .graph
                .edges()
                .map(|e| e.iter().map(|&v| label_general(v)).collect())
                .collect(),
        );
        let b = norm(
            direct
                .edges
                .iter()
                .map(|e| e.iter().map(|&v| label_direct(v)).collect())
                .collect(),
        );
        assert_eq!(a, b);
    }
}
