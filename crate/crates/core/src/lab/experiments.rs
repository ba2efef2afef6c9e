use super::{
    degrade_to_degree, sample_hk, wilson_interval, ExperimentConfig, ExperimentKind, HostKind, PHat,
};
use crate::combin::{binom, subsets};
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, Vertex, VertexSet};
use crate::matchpower::find_perfect_matching;
use crate::par;
use crate::seed::derive_seed;
use crate::thresholds::{conjectured_density, space_barrier};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const CSV_VERSION: u32 = 1;

fn ratio_f64(r: num_rational::Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn ceil_tol(x: f64) -> u64 {
    (x - 1e-9).ceil().max(0.0) as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResilienceRow {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p: f64,
    pub gamma: f64,
    pub threshold: u64,
    /// `δ_d` of the degraded graph, or of the sample when infeasible.
    pub min_deg: u64,
    pub feasible: bool,
    pub pm_found: bool,
    pub nodes: u64,
    /// `-` unless timing is on.
    pub seconds: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: String,
    pub trials: usize,
    /// Trials that produced a measurable outcome.
    pub feasible: usize,
    pub infeasible: usize,
    /// Successes among feasible trials (PM found, or inheritance failures).
    pub count: usize,
    pub frequency: Option<f64>,
    pub wilson_low: Option<f64>,
    pub wilson_high: Option<f64>,
}

impl Summary {
    fn new(experiment: &str, trials: usize, feasible: usize, count: usize) -> Self {
        let w = wilson_interval(count as u64, feasible as u64);
        Summary {
            experiment: experiment.into(),
            trials,
            feasible,
            infeasible: trials - feasible,
            count,
            frequency: (feasible > 0).then(|| count as f64 / feasible as f64),
            wilson_low: w.map(|x| x.0),
            wilson_high: w.map(|x| x.1),
        }
    }
}

fn seconds(cfg: &ExperimentConfig, start: Instant) -> String {
    if cfg.timing {
        format!("{:.6}", start.elapsed().as_secs_f64())
    } else {
        "-".into()
    }
}

/// Sample, degrade to the proxy threshold, then look for a perfect matching.
///
/// The threshold is `⌈(conjectured density + γ) · p̂ · C(n-d, k-d)⌉`, at least 1.
pub fn resilience_experiment(cfg: &ExperimentConfig) -> Result<(Vec<ResilienceRow>, Summary)> {
    cfg.validate()?;
    let (n, k, d) = (cfg.n, cfg.k, cfg.d);
    let density = ratio_f64(conjectured_density(d, k)?);
    let full = binom((n - d) as u64, (k - d) as u64) as f64;
    let all = binom(n as u64, k as u64) as f64;
    let rows = par::map_indexed(cfg.trials, |i| -> Result<ResilienceRow> {
        let start = Instant::now();
        let seed = derive_seed(cfg.master_seed, i as u64);
        let g = sample_hk(n, k, cfg.p, derive_seed(seed, 0))?;
        let p_hat = match cfg.p_hat {
            PHat::Nominal => cfg.p,
            PHat::Empirical => g.edge_count() as f64 / all,
        };
        // a zero threshold is vacuous, so it is raised to 1
        let threshold = ceil_tol((density + cfg.gamma) * p_hat * full).max(1);
        let mut row = ResilienceRow {
            trial: i,
            seed,
            n,
            k,
            d,
            p: cfg.p,
            gamma: cfg.gamma,
            threshold,
            min_deg: 0,
            feasible: false,
            pm_found: false,
            nodes: 0,
            seconds: String::new(),
        };
        match degrade_to_degree(&g, d, threshold, cfg.policy, derive_seed(seed, 1), None) {
            Ok(h) => {
                let res = find_perfect_matching(&h, cfg.budget);
                row.min_deg = h.min_d_degree(d)?.value;
                row.feasible = true;
                row.pm_found = res.is_perfect();
                row.nodes = res.nodes_explored;
            }
            Err(Error::TargetInfeasible { actual, .. }) => row.min_deg = actual,
            Err(e) => return Err(e),
        }
        row.seconds = seconds(cfg, start);
        Ok(row)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let feasible = rows.iter().filter(|r| r.feasible).count();
    let found = rows.iter().filter(|r| r.pm_found).count();
    Ok((
        rows,
        Summary::new("resilience", cfg.trials, feasible, found),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InheritanceRow {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub q: usize,
    pub eta: f64,
    /// `δ_d(host) / C(n-d, k-d)`.
    pub host_density: f64,
    /// `⌈(host density - η/2) · C(q-d, k-d)⌉`.
    pub threshold: u64,
    pub min_deg: u64,
    pub holds: bool,
    pub seconds: String,
}

fn inheritance_host(cfg: &ExperimentConfig) -> Result<Hypergraph> {
    match cfg.host {
        HostKind::Complete => Ok(Hypergraph::complete(cfg.n, cfg.k)),
        HostKind::SpaceBarrier => Ok(space_barrier(cfg.n, cfg.k, cfg.d)?.graph),
        HostKind::Random => sample_hk(cfg.n, cfg.k, cfg.p, derive_seed(cfg.master_seed, u64::MAX)),
    }
}

/// Does a random q-subset of the host keep (most of) the host's minimum
/// d-degree density? Reports the empirical failure frequency.
pub fn inheritance_experiment(cfg: &ExperimentConfig) -> Result<(Vec<InheritanceRow>, Summary)> {
    cfg.validate()?;
    let (n, k, d, q) = (cfg.n, cfg.k, cfg.d, cfg.q);
    if q < k || q > n {
        return Err(Error::Size(format!(
            "subset size {q} must lie in {k}..={n}"
        )));
    }
    let host = inheritance_host(cfg)?;
    let host_density =
        host.min_d_degree(d)?.value as f64 / binom((n - d) as u64, (k - d) as u64) as f64;
    let threshold =
        ceil_tol((host_density - cfg.eta / 2.0) * binom((q - d) as u64, (k - d) as u64) as f64);
    let picks: Vec<(u64, Vec<Vertex>)> = if cfg.exhaustive {
        subsets(n, q)
            .enumerate()
            .map(|(i, s)| (i as u64, s))
            .collect()
    } else {
        (0..cfg.trials)
            .map(|i| {
                let seed = derive_seed(cfg.master_seed, i as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut s: Vec<Vertex> = rand::seq::index::sample(&mut rng, n, q)
                    .into_iter()
                    .map(|v| v as Vertex)
                    .collect();
                s.sort_unstable();
                (seed, s)
            })
            .collect()
    };
    let rows = par::map_slice(&picks, |(seed, s)| -> Result<InheritanceRow> {
        let start = Instant::now();
        let (sub, _) = host.induced(&VertexSet::new(n, s.iter().copied())?);
        let min_deg = sub.min_d_degree(d)?.value;
        Ok(InheritanceRow {
            trial: 0,
            seed: *seed,
            n,
            k,
            d,
            q,
            eta: cfg.eta,
            host_density,
            threshold,
            min_deg,
            holds: min_deg >= threshold,
            seconds: seconds(cfg, start),
        })
    })
    .into_iter()
    .enumerate()
    .map(|(i, r)| r.map(|r| InheritanceRow { trial: i, ..r }))
    .collect::<Result<Vec<_>>>()?;
    let failures = rows.iter().filter(|r| !r.holds).count();
    Ok((
        rows.clone(),
        Summary::new("inheritance", rows.len(), rows.len(), failures),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadRow {
    pub x_size: usize,
    pub samples: usize,
    pub max_count: u64,
    pub bound: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub p_hat: f64,
    /// `2 ⌊λn⌋ · p̂ · C(n-2, k-2)`.
    pub bound: f64,
    pub max_ratio: f64,
    pub rows: Vec<LoadRow>,
}

/// Samples pairs `(w, X)` with `1 <= |X| <= λn`, `w ∉ X`, and counts the edges
/// through `w` that meet `X`, against `2(λn) p̂ C(n-2, k-2)` with `p̂` the
/// edge density of `g`.
pub fn neighborhood_load_check(
    g: &Hypergraph,
    lambda: f64,
    samples: usize,
    seed: u64,
) -> LoadReport {
    let (n, k) = (g.n(), g.k());
    let cap = ((lambda * n as f64).floor() as usize).min(n.saturating_sub(1));
    let all = binom(n as u64, k as u64) as f64;
    let p_hat = if all > 0.0 {
        g.edge_count() as f64 / all
    } else {
        0.0
    };
    let bound = 2.0
        * cap as f64
        * p_hat
        * binom(n.saturating_sub(2) as u64, k.saturating_sub(2) as u64) as f64;
    let mut rows: Vec<LoadRow> = (1..=cap)
        .map(|x_size| LoadRow {
            x_size,
            samples: 0,
            max_count: 0,
            bound,
            max_ratio: 0.0,
        })
        .collect();
    if cap == 0 || n < 2 {
        return LoadReport {
            p_hat,
            bound,
            max_ratio: 0.0,
            rows,
        };
    }
    let inc = g.incidence();
    let counts = par::map_indexed(samples, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
        let x_size = rng.gen_range(1..=cap);
        let w = rng.gen_range(0..n);
        let mut in_x = vec![false; n];
        for v in rand::seq::index::sample(&mut rng, n - 1, x_size) {
            in_x[if v >= w { v + 1 } else { v }] = true;
        }
        let c = inc[w]
            .iter()
            .filter(|&&e| g.edge(e).iter().any(|&v| in_x[v as usize]))
            .count() as u64;
        (x_size, c)
    });
    for (x_size, c) in counts {
        let row = &mut rows[x_size - 1];
        row.samples += 1;
        row.max_count = row.max_count.max(c);
    }
    for row in &mut rows {
        row.max_ratio = if bound > 0.0 {
            row.max_count as f64 / bound
        } else {
            0.0
        };
    }
    let max_ratio = rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    LoadReport {
        p_hat,
        bound,
        max_ratio,
        rows,
    }
}

pub fn load_experiment(cfg: &ExperimentConfig) -> Result<LoadReport> {
    cfg.validate()?;
    let g = sample_hk(cfg.n, cfg.k, cfg.p, derive_seed(cfg.master_seed, u64::MAX))?;
    Ok(neighborhood_load_check(
        &g,
        cfg.lambda,
        cfg.trials,
        cfg.master_seed,
    ))
}

fn header_line(kind: &str, cfg: &ExperimentConfig) -> String {
    format!(
        "# hyperdirac-{kind} v{CSV_VERSION} name={} proxy=conjectured_density p_hat={:?} policy={:?} master_seed={}\n",
        cfg.name, cfg.p_hat, cfg.policy, cfg.master_seed
    )
    .to_lowercase()
}

fn write_rows<W: Write, T: Serialize>(mut w: W, first: &str, rows: &[T]) -> Result<()> {
    w.write_all(first.as_bytes())?;
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

fn read_rows<R: BufRead, T: DeserializeOwned>(mut r: R, kind: &str) -> Result<Vec<T>> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let prefix = format!("# hyperdirac-{kind} v");
    let version = first
        .strip_prefix(&prefix)
        .and_then(|rest| rest.split_whitespace().next())
        .ok_or_else(|| Error::Schema(format!("missing {kind} CSV header")))?;
    if version != CSV_VERSION.to_string() {
        return Err(Error::Schema(format!("{kind} CSV version {version}")));
    }
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|x| x.map_err(Error::from))
        .collect()
}

pub fn write_resilience_csv<W: Write>(
    w: W,
    cfg: &ExperimentConfig,
    rows: &[ResilienceRow],
) -> Result<()> {
    write_rows(w, &header_line("resilience", cfg), rows)
}

pub fn read_resilience_csv<R: BufRead>(r: R) -> Result<Vec<ResilienceRow>> {
    read_rows(r, "resilience")
}

pub fn write_inheritance_csv<W: Write>(
    w: W,
    cfg: &ExperimentConfig,
    rows: &[InheritanceRow],
) -> Result<()> {
    write_rows(w, &header_line("inheritance", cfg), rows)
}

pub fn read_inheritance_csv<R: BufRead>(r: R) -> Result<Vec<InheritanceRow>> {
    read_rows(r, "inheritance")
}

pub fn write_summary_csv<W: Write>(w: W, cfg: &ExperimentConfig, s: &Summary) -> Result<()> {
    write_rows(w, &header_line("summary", cfg), std::slice::from_ref(s))
}

pub fn write_load_csv<W: Write>(w: W, cfg: &ExperimentConfig, report: &LoadReport) -> Result<()> {
    write_rows(w, &header_line("load", cfg), &report.rows)
}

/// `<output>.summary.csv` next to the main output.
pub fn summary_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".summary.csv");
    PathBuf::from(s)
}

/// Runs the configured experiment and writes its CSV files. Returns the
/// paths written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let create = |p: &Path| -> Result<std::io::BufWriter<std::fs::File>> {
        Ok(std::io::BufWriter::new(std::fs::File::create(p)?))
    };
    let out = cfg.output.clone();
    match cfg.kind {
        ExperimentKind::Resilience => {
            let (rows, summary) = resilience_experiment(cfg)?;
            write_resilience_csv(create(&out)?, cfg, &rows)?;
            write_summary_csv(create(&summary_path(&out))?, cfg, &summary)?;
            Ok(vec![out.clone(), summary_path(&out)])
        }
        ExperimentKind::Inheritance => {
            let (rows, summary) = inheritance_experiment(cfg)?;
            write_inheritance_csv(create(&out)?, cfg, &rows)?;
            write_summary_csv(create(&summary_path(&out))?, cfg, &summary)?;
            Ok(vec![out.clone(), summary_path(&out)])
        }
        ExperimentKind::Load => {
            let report = load_experiment(cfg)?;
            write_load_csv(create(&out)?, cfg, &report)?;
            Ok(vec![out])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig {
            trials: 20,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn resilience_p_zero_is_all_infeasible() {
        let c = ExperimentConfig { p: 0.0, ..cfg() };
        let (rows, s) = resilience_experiment(&c).unwrap();
        assert_eq!(rows.len(), 20);
        assert!(rows.iter().all(|r| !r.feasible && !r.pm_found));
        assert_eq!(s.infeasible, 20);
        assert_eq!(s.frequency, None);
    }

    #[test]
    fn resilience_csv_round_trip() {
        let (rows, _) = resilience_experiment(&cfg()).unwrap();
        let mut buf = Vec::new();
        write_resilience_csv(&mut buf, &cfg(), &rows).unwrap();
        assert_eq!(read_resilience_csv(buf.as_slice()).unwrap(), rows);
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("trial,seed,n,k,d,p,gamma,threshold,min_deg"));
        let bumped = text.replacen(" v1 ", " v2 ", 1);
        assert!(matches!(
            read_resilience_csv(bumped.as_bytes()),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            read_resilience_csv("trial,seed\n".as_bytes()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn inheritance_complete_always_holds() {
        let c = ExperimentConfig {
            kind: ExperimentKind::Inheritance,
            eta: 0.0,
            ..cfg()
        };
        let (rows, s) = inheritance_experiment(&c).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.holds && r.min_deg == 4 && r.threshold == 4));
        assert_eq!(s.count, 0);
    }

    #[test]
    fn inheritance_space_barrier_exhaustive() {
        let c = ExperimentConfig {
            kind: ExperimentKind::Inheritance,
            host: HostKind::SpaceBarrier,
            d: 1,
            exhaustive: true,
            ..cfg()
        };
        let (rows, s) = inheritance_experiment(&c).unwrap();
        assert_eq!(rows.len(), 924);
        assert!(s.count > 0 && s.count < 924, "{s:?}");
    }

    #[test]
    fn load_complete_is_analytic() {
        let g = Hypergraph::complete(14, 3);
        let r = neighborhood_load_check(&g, 0.3, 500, 1);
        for row in r.rows.iter().filter(|r| r.samples > 0) {
            let exact = binom(13, 2) - binom(13 - row.x_size as u64, 2);
            assert_eq!(row.max_count, exact);
        }
        let e = neighborhood_load_check(&Hypergraph::empty(14, 3), 0.3, 100, 1);
        assert_eq!(e.max_ratio, 0.0);
    }
}
