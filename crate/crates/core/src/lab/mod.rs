//! Random models, adversarial degradation and the statistical experiments,
//! together with their configuration and CSV formats.

mod config;
mod experiments;

pub use crate::seed::derive_seed;
pub use config::{ExperimentConfig, ExperimentKind, HostKind, PHat};
pub use experiments::{
    inheritance_experiment, load_experiment, neighborhood_load_check, read_inheritance_csv,
    read_resilience_csv, resilience_experiment, run_experiment, summary_path,
    write_inheritance_csv, write_load_csv, write_resilience_csv, write_summary_csv, InheritanceRow,
    LoadReport, LoadRow, ResilienceRow, Summary, CSV_VERSION,
};

use crate::combin::{binom, colex_rank, for_each_subset_of, subsets};
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest `C(n, k)` [`sample_hk`] will walk through.
pub const SAMPLE_LIMIT: u64 = 50_000_000;

/// The binomial random k-graph `H^k(n, p)`: each k-set, in lexicographic
/// order, is kept when a uniform draw falls below `p`.
pub fn sample_hk(n: usize, k: usize, p: f64, seed: u64) -> Result<Hypergraph> {
    if k == 0 || k > n {
        return Err(Error::Size(format!(
            "need 1 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!(
            "edge probability {p} is not in [0, 1]"
        )));
    }
    let total = binom(n as u64, k as u64);
    if total > SAMPLE_LIMIT {
        return Err(Error::Capacity(format!(
            "C({n}, {k}) = {total} k-sets is too many to sample"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = Vec::new();
    for e in subsets(n, k) {
        if rng.gen::<f64>() < p {
            flat.extend_from_slice(&e);
        }
    }
    let edges: Vec<&[Vertex]> = flat.chunks_exact(k).collect();
    Hypergraph::new(n, k, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Try the edges once each in random order.
    Random,
    /// Repeatedly delete the edge whose removal leaves the smallest slack
    /// on its own d-sets.
    Greedy,
}

impl std::str::FromStr for Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Policy::Random),
            "greedy" => Ok(Policy::Greedy),
            _ => Err(Error::Precondition(format!("unknown policy {s:?}"))),
        }
    }
}

/// Deletes edges of `g` while every d-set keeps degree at least `target`.
///
/// Stops when no edge can go or after `max_deletions`. The result's minimum
/// d-degree is rechecked before returning.
pub fn degrade_to_degree(
    g: &Hypergraph,
    d: usize,
    target: u64,
    policy: Policy,
    seed: u64,
    max_deletions: Option<usize>,
) -> Result<Hypergraph> {
    let mut deg = g.degree_profile(d)?;
    let actual = deg.iter().copied().min().unwrap_or(0);
    if actual < target {
        return Err(Error::TargetInfeasible { actual, target });
    }
    let m = g.edge_count();
    let ranks: Vec<Vec<usize>> = g
        .edges()
        .map(|e| {
            let mut r = Vec::new();
            for_each_subset_of(e, d, |s| r.push(colex_rank(s)));
            r
        })
        .collect();
    let mut alive = vec![true; m];
    let limit = max_deletions.unwrap_or(usize::MAX);
    let mut deleted = 0;
    match policy {
        Policy::Random => {
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for i in order {
                if deleted == limit {
                    break;
                }
                if ranks[i].iter().all(|&r| deg[r] > target) {
                    ranks[i].iter().for_each(|&r| deg[r] -= 1);
                    alive[i] = false;
                    deleted += 1;
                }
            }
        }
        Policy::Greedy => {
            while deleted < limit {
                // slack after removal is deg - 1 - target; ties go to the lower index
                let pick = (0..m)
                    .filter(|&i| alive[i])
                    .filter_map(|i| {
                        let slack = ranks[i].iter().map(|&r| deg[r]).min()?;
                        (slack > target).then_some((slack, i))
                    })
                    .min();
                let Some((_, i)) = pick else { break };
                ranks[i].iter().for_each(|&r| deg[r] -= 1);
                alive[i] = false;
                deleted += 1;
            }
        }
    }
    let out = g.filter_edges(|i, _| alive[i]);
    let check = out.min_d_degree(d)?.value;
    if check < target {
        return Err(Error::TargetInfeasible {
            actual: check,
            target,
        });
    }
    Ok(out)
}

/// Wilson score interval at 95% for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64) -> Option<(f64, f64)> {
    if n == 0 {
        return None;
    }
    let z = 1.959_963_984_540_054_f64;
    let (nf, ph) = (n as f64, successes as f64 / n as f64);
    let denom = 1.0 + z * z / nf;
    let centre = (ph + z * z / (2.0 * nf)) / denom;
    let half = z * (ph * (1.0 - ph) / nf + z * z / (4.0 * nf * nf)).sqrt() / denom;
    Some(((centre - half).max(0.0), (centre + half).min(1.0)))
}
