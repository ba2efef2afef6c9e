use super::ThresholdRecord;
use crate::combin::{binom, subsets};
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, Vertex};
use crate::par;

/// Largest number of potential edges the exhaustive sweeps accept.
pub const SWEEP_EDGE_LIMIT: usize = 24;

const CHUNK: u64 = 1 << 14;

fn guard(n: usize, k: usize, d: usize) -> Result<Vec<Vec<Vertex>>> {
    if k == 0 || !n.is_multiple_of(k) || n < k {
        return Err(Error::Size(format!(
            "need k | n and n >= k, got n={n}, k={k}"
        )));
    }
    if d == 0 || d >= k {
        return Err(Error::Size(format!("need 1 <= d < k, got d={d}, k={k}")));
    }
    let e = binom(n as u64, k as u64);
    if e > SWEEP_EDGE_LIMIT as u64 {
        return Err(Error::Capacity(format!(
            "C({n},{k}) = {e} potential edges; full enumeration is limited to {SWEEP_EDGE_LIMIT}"
        )));
    }
    Ok(subsets(n, k).collect())
}

fn record(n: usize, k: usize, d: usize, all: &[Vec<Vertex>], best: (i64, u32)) -> ThresholdRecord {
    let (delta, mask) = best;
    let witness = Hypergraph::new(
        n,
        k,
        (0..all.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &all[i]),
    )
    .expect("sub-family of the complete graph");
    ThresholdRecord {
        n,
        k,
        d,
        m_value: (delta + 1) as u64,
        extremal_witness: witness,
        graphs_enumerated: 1u64 << all.len(),
    }
}

fn better(a: (i64, u32), b: (i64, u32)) -> (i64, u32) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Edge masks of the perfect matchings of `K_n^(k)`.
fn perfect_matching_masks(n: usize, all: &[Vec<Vertex>]) -> Vec<u32> {
    fn rec(n: usize, all: &[Vec<Vertex>], used: u32, mask: u32, out: &mut Vec<u32>) {
        let Some(v) = (0..n as u32).find(|&v| used >> v & 1 == 0) else {
            out.push(mask);
            return;
        };
        for (i, e) in all.iter().enumerate() {
            let em = e.iter().fold(0u32, |acc, &u| acc | 1 << u);
            if e[0] == v && em & used == 0 {
                rec(n, all, used | em, mask | 1 << i, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(n, all, 0, 0, &mut out);
    out
}

/// Exact `m_d(k, n)` over all labelled k-graphs on `n` vertices.
///
/// Each graph is a bitmask over the potential edges. A graph is skipped as
/// soon as one d-set has degree no larger than the best PM-free graph found
/// so far in its chunk; the PM test is containment of a perfect matching
/// mask. Ties go to the smallest mask, so the witness does not depend on how
/// the sweep is split up.
pub fn exact_dirac_threshold(n: usize, k: usize, d: usize) -> Result<ThresholdRecord> {
    let all = guard(n, k, d)?;
    let dmasks: Vec<u32> = subsets(n, d)
        .map(|s| {
            all.iter()
                .enumerate()
                .filter(|(_, e)| s.iter().all(|v| e.contains(v)))
                .fold(0u32, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let pms = perfect_matching_masks(n, &all);
    let total = 1u64 << all.len();
    let best = par::chunked_fold(
        total,
        CHUNK,
        (-1i64, 0u32),
        |range| {
            let mut best = (-1i64, 0u32);
            'masks: for m in range {
                let m = m as u32;
                let mut delta = i64::MAX;
                for &dm in &dmasks {
                    let deg = (m & dm).count_ones() as i64;
                    if deg <= best.0 {
                        continue 'masks;
                    }
                    delta = delta.min(deg);
                }
                if pms.iter().any(|&p| p & !m == 0) {
                    continue;
                }
                best = (delta, m);
            }
            best
        },
        better,
    );
    Ok(record(n, k, d, &all, best))
}

/// The same quantity by a direct, unpruned sweep that shares no kernel with
/// [`exact_dirac_threshold`]: degrees are recounted edge by edge and perfect
/// matchings are searched recursively.
pub fn exact_dirac_threshold_unpruned(n: usize, k: usize, d: usize) -> Result<ThresholdRecord> {
    let all = guard(n, k, d)?;
    let dsets: Vec<Vec<Vertex>> = subsets(n, d).collect();
    let total = 1u64 << all.len();
    let best = par::chunked_fold(
        total,
        CHUNK,
        (-1i64, 0u32),
        |range| {
            let mut best = (-1i64, 0u32);
            for m in range {
                let edges: Vec<&Vec<Vertex>> = (0..all.len())
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| &all[i])
                    .collect();
                let delta = dsets
                    .iter()
                    .map(|s| {
                        edges
                            .iter()
                            .filter(|e| s.iter().all(|v| e.contains(v)))
                            .count() as i64
                    })
                    .min()
                    .unwrap();
                if !has_pm(&edges, &mut vec![false; n]) {
                    best = better(best, (delta, m as u32));
                }
            }
            best
        },
        better,
    );
    Ok(record(n, k, d, &all, best))
}

fn has_pm(edges: &[&Vec<Vertex>], used: &mut Vec<bool>) -> bool {
    let Some(v) = used.iter().position(|&u| !u) else {
        return true;
    };
    for e in edges {
        if e.contains(&(v as Vertex)) && e.iter().all(|&u| !used[u as usize]) {
            e.iter().for_each(|&u| used[u as usize] = true);
            let ok = has_pm(edges, used);
            e.iter().for_each(|&u| used[u as usize] = false);
            if ok {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_dirac() {
        for (n, m) in [(4, 2), (6, 3)] {
            let r = exact_dirac_threshold(n, 2, 1).unwrap();
            assert_eq!(r.m_value, m);
            assert_eq!(r, exact_dirac_threshold_unpruned(n, 2, 1).unwrap());
        }
    }

    #[test]
    fn pm_masks_counted() {
        let all: Vec<Vec<u32>> = subsets(6, 3).collect();
        assert_eq!(perfect_matching_masks(6, &all).len(), 10);
        let all: Vec<Vec<u32>> = subsets(6, 2).collect();
        assert_eq!(perfect_matching_masks(6, &all).len(), 15);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            exact_dirac_threshold(9, 3, 1),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            exact_dirac_threshold(7, 3, 1),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            exact_dirac_threshold(6, 3, 3),
            Err(Error::Size(_))
        ));
    }
}
