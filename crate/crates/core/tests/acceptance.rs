//! Acceptance run: one PASS/FAIL line per criterion.

use hyperdirac::absorbing::{
    assemble_contractible, contract_absorber, contracted_absorber_decomposition,
    find_sparse_r_absorber, grid_absorber, verify_absorber, Absorber, AbsorberQuery,
    ContractedAbsorber, SparseQuery,
};
use hyperdirac::combin::binom;
use hyperdirac::hypercore::{berge_girth, k_density, CompleteHost, KDensityMode};
use hyperdirac::lab::{
    derive_seed, resilience_experiment, wilson_interval, write_resilience_csv, write_summary_csv,
    ExperimentConfig,
};
use hyperdirac::matchpower::{
    aharoni_haxell_holds, find_disjoint_representatives, find_perfect_matching, verify_exact_cover,
    verify_perfect_matching, AhMode,
};
use hyperdirac::pipeline::{dirac_perfect_matching, PipelineParams};
use hyperdirac::templates::{
    build_absorbing_structure, build_resilient_template, feasible_removal_sizes,
    structure_matching_after_removal, verify_resilient_template, ResilienceMode, TemplateParams,
};
use hyperdirac::thresholds::{
    exact_dirac_threshold, exact_dirac_threshold_unpruned, parity_barrier, space_barrier,
};
use hyperdirac::{Hypergraph, MatchStatus, Vertex, VertexSet};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || {
        format!("took {:.1?}, limit {limit:?}", start.elapsed())
    })
}

fn c1() -> Outcome {
    let start = Instant::now();
    for n in [4usize, 6] {
        let r = exact_dirac_threshold(n, 2, 1).map_err(|e| e.to_string())?;
        let want = n.div_ceil(2) as u64;
        ensure(r.m_value == want, || {
            format!("m_1(2,{n}) = {}, expected {want}", r.m_value)
        })?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "m_1(2,4) = 2, m_1(2,6) = 3 in {:.2?}",
        start.elapsed()
    ))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for d in [2usize, 1] {
        let a = exact_dirac_threshold(6, 3, d).map_err(|e| e.to_string())?;
        let b = exact_dirac_threshold_unpruned(6, 3, d).map_err(|e| e.to_string())?;
        ensure(a.graphs_enumerated == 1 << 20, || {
            format!("pruned sweep saw {} graphs", a.graphs_enumerated)
        })?;
        ensure(a.m_value == b.m_value, || {
            format!("m_{d}(3,6): pruned {} vs unpruned {}", a.m_value, b.m_value)
        })?;
        let h = &a.extremal_witness;
        ensure(
            h.min_d_degree(d).unwrap().value == a.m_value - 1
                && find_perfect_matching(h, u64::MAX).status == MatchStatus::None,
            || format!("witness for d = {d} is not extremal"),
        )?;
        parts.push(format!("m_{d}(3,6) = {}", a.m_value));
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{}, both sweeps agree, {:.1?}",
        parts.join(", "),
        start.elapsed()
    ))
}

fn c3() -> Outcome {
    for (n, k) in [(9usize, 3usize), (12, 3), (8, 4)] {
        for (name, b) in [
            ("space", space_barrier(n, k, 1)),
            ("parity", parity_barrier(n, k, 1)),
        ] {
            let b = b.map_err(|e| format!("{name}({n},{k}): {e}"))?;
            let status = find_perfect_matching(&b.graph, u64::MAX).status;
            ensure(status == MatchStatus::None, || {
                format!("{name}({n},{k}) oracle says {status:?}")
            })?;
        }
    }
    let ratios: Vec<Ratio<u64>> = [9usize, 12, 15]
        .iter()
        .map(|&n| {
            let b = space_barrier(n, 3, 1).unwrap();
            Ratio::new(b.min_degree.value, binom(n as u64 - 1, 2))
        })
        .collect();
    let limit = Ratio::new(5, 9);
    ensure(
        ratios.windows(2).all(|w| w[0] < w[1]) && ratios.iter().all(|&r| r < limit),
        || format!("space barrier ratios {ratios:?} are not increasing below 5/9"),
    )?;
    let shown: Vec<String> = ratios.iter().map(|r| r.to_string()).collect();
    Ok(format!(
        "6 barriers PM-free; delta_1 ratios {}",
        shown.join(" < ")
    ))
}

fn basic() -> Absorber {
    Absorber::new(
        6,
        vec![0, 1, 2],
        vec![vec![0, 1, 3], vec![2, 4, 5]],
        vec![vec![3, 4, 5]],
    )
    .unwrap()
}

/// Single-vertex substitutions, dropped edges and moved edges of `a`,
/// built without the constructor's checks.
fn mutations(a: &Absorber, n: usize) -> Vec<Absorber> {
    let mut out = Vec::new();
    let lists = |m: &Absorber| [m.covering.clone(), m.noncovering.clone()];
    for side in 0..2 {
        let edges = &lists(a)[side];
        for (i, e) in edges.iter().enumerate() {
            for pos in 0..e.len() {
                for u in 0..n as Vertex {
                    if e.contains(&u) {
                        continue;
                    }
                    let mut m = a.clone();
                    let list = if side == 0 {
                        &mut m.covering
                    } else {
                        &mut m.noncovering
                    };
                    list[i][pos] = u;
                    list[i].sort_unstable();
                    out.push(m);
                }
            }
            let mut dropped = a.clone();
            if side == 0 {
                dropped.covering.remove(i);
            } else {
                dropped.noncovering.remove(i);
            }
            out.push(dropped);
        }
    }
    let mut moved = a.clone();
    let e = moved.covering.pop().unwrap();
    moved.noncovering.push(e);
    out.push(moved);
    let mut root = a.clone();
    root.roots[0] = 5;
    out.push(root);
    out
}

fn c4() -> Outcome {
    let host = CompleteHost { n: 7, k: 3 };
    verify_absorber(&basic(), &host).map_err(|d| format!("basic absorber rejected: {d}"))?;
    let trivial = Absorber::trivial(7, vec![4, 5, 6]).map_err(|e| e.to_string())?;
    verify_absorber(&trivial, &host).map_err(|d| format!("trivial rejected: {d}"))?;
    let mut bad = mutations(&basic(), 7);
    bad.extend(mutations(&trivial, 7));
    ensure(bad.len() >= 20, || format!("only {} mutations", bad.len()))?;
    if let Some(m) = bad.iter().find(|m| verify_absorber(m, &host).is_ok()) {
        return Err(format!("mutation accepted: {m:?}"));
    }

    let rooted = vec![vec![0, 3, 4], vec![1, 5, 6], vec![2, 7, 8]];
    let h1 = grid_absorber(21, &[3, 5, 7], &[vec![9, 10, 11], vec![12, 13, 14]])
        .map_err(|e| e.to_string())?;
    let h2 = grid_absorber(21, &[4, 6, 8], &[vec![15, 16, 17], vec![18, 19, 20]])
        .map_err(|e| e.to_string())?;
    let c = assemble_contractible(21, &[0, 1, 2], &rooted, &[h1, h2]).map_err(|e| e.to_string())?;
    verify_absorber(&c.assembled, &CompleteHost { n: 21, k: 3 })
        .map_err(|d| format!("assembled two-grid absorber rejected: {d}"))?;
    let w = contract_absorber(&c);
    let wg = w.graph().map_err(|e| e.to_string())?;
    ensure(w.vertex_count() == 15 && wg.edge_count() == 10, || {
        format!(
            "contraction has {} vertices, {} edges",
            w.vertex_count(),
            wg.edge_count()
        )
    })?;
    for h in &w.subabsorbers {
        ensure(h.roots == [0, 1, 2], || "sub-absorber roots moved".into())?;
        verify_absorber(h, &wg).map_err(|d| format!("contracted sub-absorber: {d}"))?;
    }
    let shared = w.subabsorbers[0]
        .vertices
        .intersection(&w.subabsorbers[1].vertices);
    ensure(shared.as_slice() == [0, 1, 2], || {
        format!("sub-absorbers share {:?}", shared.as_slice())
    })?;
    // mapping back: every contracted edge is a sub-absorber edge of the original
    let originals: Vec<Vec<Vertex>> = c
        .subabsorbers
        .iter()
        .flat_map(|h| h.edges().cloned())
        .collect();
    for e in &w.edges {
        let back: Vec<Vertex> = e
            .iter()
            .map(|&v| {
                if (v as usize) < 3 {
                    rooted[v as usize][0]
                } else {
                    w.vertex_map[v as usize]
                }
            })
            .collect();
        let hit = originals.iter().any(|o| {
            o.iter()
                .zip(&back)
                .all(|(&a, &b)| a == b || rooted.iter().any(|r| r[0] == b && r[1..].contains(&a)))
        });
        ensure(hit, || format!("contracted edge {e:?} has no preimage"))?;
    }
    Ok(format!(
        "basic and trivial absorbers accepted, {} mutations rejected, two-grid absorber contracts to 15 vertices / 10 edges",
        bad.len()
    ))
}

/// Contracted absorber built from two vertex-disjoint K-sparse sub-absorbers.
fn contracted_instance(
    big_k: usize,
    q: usize,
    host: &CompleteHost,
    seed: u64,
) -> Result<ContractedAbsorber, String> {
    let n = host.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked: Vec<Vertex> = rand::seq::index::sample(&mut rng, n, 9)
        .into_iter()
        .map(|v| v as Vertex)
        .collect();
    let roots = &picked[..3];
    let rooted: Vec<Vec<Vertex>> = (0..3)
        .map(|i| {
            let mut e = vec![roots[i], picked[3 + i], picked[6 + i]];
            e.sort_unstable();
            let pos = e.iter().position(|&v| v == roots[i]).unwrap();
            e.remove(pos);
            e.insert(0, roots[i]);
            e
        })
        .collect();
    let mut used = VertexSet::new(n, picked.iter().copied()).unwrap();
    let mut subs = Vec::new();
    for j in 1..3 {
        let sub_roots: Vec<Vertex> = rooted.iter().map(|e| e[j]).collect();
        let mut sq = SparseQuery::new(n, big_k, q, derive_seed(seed, j as u64));
        sq.forbidden = used.difference(&VertexSet::new(n, sub_roots.iter().copied()).unwrap());
        let a = find_sparse_r_absorber(host, &sub_roots, &sq).map_err(|e| e.to_string())?;
        used = used.union(&a.vertices);
        subs.push(a);
    }
    let c = assemble_contractible(n, roots, &rooted, &subs).map_err(|e| e.to_string())?;
    Ok(contract_absorber(&c))
}

fn c5() -> Outcome {
    let k = 3u64;
    let mut total = 0;
    let (mut checked, mut decomposes) = (0, 0);
    let mut summary = Vec::new();
    for (big_k, q, n, count) in [
        (4usize, 3usize, 200usize, 40u64),
        (4, 6, 300, 30),
        (6, 3, 200, 40),
        (6, 6, 400, 30),
        (8, 3, 600, 70),
    ] {
        let host = CompleteHost { n, k: 3 };
        let bound = (Ratio::new(k * (k + 1), big_k as u64 * (k - 1) - k) + Ratio::from_integer(2))
            / Ratio::from_integer(k);
        let mut worst = Ratio::from_integer(0u64);
        for s in 0..count {
            let w = contracted_instance(
                big_k,
                q,
                &host,
                derive_seed(big_k as u64 * 100 + q as u64, s),
            )?;
            let g = w.graph().map_err(|e| e.to_string())?;
            // whether the contraction is itself an absorber is reported, not required
            if q == 3 {
                checked += 1;
                decomposes += usize::from(contracted_absorber_decomposition(&w).is_some());
            }
            let girth = berge_girth(g.n(), &g.edge_list());
            ensure(girth.at_least(big_k), || {
                format!("K = {big_k}, q = {q}, seed {s}: contracted girth {girth:?}")
            })?;
            let m = k_density(&g, KDensityMode::Auto).map_err(|e| e.to_string())?;
            ensure(m.value <= bound, || {
                format!(
                    "K = {big_k}, q = {q}, seed {s}: k-density {} exceeds {bound}",
                    m.value
                )
            })?;
            worst = worst.max(m.value);
            total += 1;
        }
        summary.push(format!("K={big_k},q={q}: max {worst} <= {bound}"));
    }
    ensure(total >= 200, || format!("only {total} instances"))?;
    Ok(format!(
        "{total} contracted absorbers; {}; {decomposes}/{checked} with q = 3 are absorbers themselves",
        summary.join("; ")
    ))
}

fn c6() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    // r = 6 only admits the empty removal at this v(T); r = 7 and 8 exercise
    // non-empty ones through the same construction
    for r in [6usize, 7, 8] {
        let t = build_resilient_template(r, 3, &TemplateParams::default(), 1)
            .map_err(|e| format!("r = {r}: {e}"))?;
        let c =
            verify_resilient_template(&t, ResilienceMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure(c.holds && c.exhaustive, || {
            format!("r = {r}: template fails on {:?}", c.violating)
        })?;
        parts.push(format!(
            "r = {r}: v(T) = {}, e(T) = {}, sizes {:?}, {} removals",
            t.vertex_count(),
            t.edge_count(),
            feasible_removal_sizes(&t),
            c.removals_checked
        ));
        if r == 6 {
            within(start, Duration::from_secs(120))?;
        }
    }
    Ok(format!(
        "{}; all matched, {:.2?}",
        parts.join("; "),
        start.elapsed()
    ))
}

/// Criterion 7 body; returns the matchings as JSON for the rerun check.
fn run_c7(seed: u64) -> Result<(String, String), String> {
    let t = build_resilient_template(11, 3, &TemplateParams::default(), seed)
        .map_err(|e| e.to_string())?;
    let n = 60;
    ensure(t.vertex_count() <= n, || {
        format!("template has {} vertices", t.vertex_count())
    })?;
    let host = Hypergraph::complete(n, 3);
    let z: Vec<Vertex> = (0..t.r as Vertex).collect();
    let q = AbsorberQuery::new(n, 6);
    let s = build_absorbing_structure(&host, &t, &z, &q).map_err(|e| e.to_string())?;
    let sizes = feasible_removal_sizes(&t);
    let zs = s.z.as_slice().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 7));
    let mut log = Vec::new();
    for i in 0..100 {
        let j = sizes[rng.gen_range(0..sizes.len())];
        let w = VertexSet::new(
            n,
            rand::seq::index::sample(&mut rng, zs.len(), j)
                .into_iter()
                .map(|p| zs[p]),
        )
        .unwrap();
        let m = structure_matching_after_removal(&host, &s, &w)
            .map_err(|e| format!("removal {i} {:?}: {e}", w.as_slice()))?;
        verify_exact_cover(&host, m.edges(), &s.x.difference(&w))
            .map_err(|d| format!("removal {i}: {d}"))?;
        log.push((w.as_slice().to_vec(), m.edges().to_vec()));
    }
    let detail = format!(
        "v(T) = {}, |X| = {}, removal sizes {:?}, 100/100 verified",
        t.vertex_count(),
        s.x.len(),
        sizes
    );
    Ok((detail, serde_json::to_string(&log).unwrap()))
}

fn c7() -> Outcome {
    run_c7(11).map(|(d, _)| d)
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut qualifying, mut attempts) = (0, 0);
    while qualifying < 500 {
        attempts += 1;
        ensure(attempts < 20_000, || {
            format!("only {qualifying} qualifying instances")
        })?;
        let t = rng.gen_range(1..=6);
        let n = rng.gen_range(6..=12);
        let p = rng.gen_range(0.15..0.6);
        let links: Vec<Hypergraph> = (0..t)
            .map(|_| Hypergraph::complete(n, 2).filter_edges(|_, _| rng.gen_bool(p)))
            .collect();
        let ah =
            aharoni_haxell_holds(&links, 2, AhMode::Exact, u64::MAX).map_err(|e| e.to_string())?;
        if !ah.holds {
            continue;
        }
        qualifying += 1;
        let reps = find_disjoint_representatives(&links, u64::MAX)
            .map_err(|e| format!("instance {attempts}: condition holds but {e}"))?;
        let mut seen = vec![false; n];
        for (i, e) in reps.iter().enumerate() {
            ensure(links[i].contains_edge(e), || {
                format!("instance {attempts}: {e:?} not in link {i}")
            })?;
            for &v in e {
                ensure(!std::mem::replace(&mut seen[v as usize], true), || {
                    format!("instance {attempts}: representatives overlap")
                })?;
            }
        }
    }
    Ok(format!(
        "{qualifying} instances satisfying the condition out of {attempts} sampled, all represented"
    ))
}

fn run_c9() -> Result<(String, String), String> {
    let params = PipelineParams::default();
    let mut reports = String::new();
    let mut successes = 0;
    for n in [18usize, 24, 30] {
        let g = Hypergraph::complete(n, 3);
        for seed in 0..20 {
            let r = dirac_perfect_matching(&g, 2, 0.1, &params, seed);
            ensure(r.success, || {
                format!("K_{n}, seed {seed} failed at {:?}", r.failure_stage)
            })?;
            let m = r.matching.as_ref().ok_or("success without a matching")?;
            verify_perfect_matching(&g, m).map_err(|d| format!("K_{n}, seed {seed}: {d}"))?;
            successes += 1;
            reports.push_str(&r.to_json().unwrap());
        }
    }
    let barrier = space_barrier(9, 3, 1).map_err(|e| e.to_string())?.graph;
    for seed in 0..20 {
        let r = dirac_perfect_matching(&barrier, 1, 0.1, &params, seed);
        ensure(!r.success, || {
            format!("space barrier reported success at seed {seed}")
        })?;
        reports.push_str(&r.to_json().unwrap());
    }
    Ok((
        format!("{successes}/60 complete-graph runs verified, 0/20 barrier successes"),
        reports,
    ))
}

fn c9() -> Outcome {
    run_c9().map(|(d, _)| d)
}

fn c10_config() -> ExperimentConfig {
    ExperimentConfig {
        name: "acceptance".into(),
        n: 12,
        k: 3,
        d: 2,
        p: 0.8,
        gamma: 0.15,
        trials: 200,
        master_seed: 10,
        ..ExperimentConfig::default()
    }
}

fn run_c10() -> Result<(String, Vec<u8>, Option<f64>), String> {
    let cfg = c10_config();
    let (rows, summary) = resilience_experiment(&cfg).map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    write_resilience_csv(&mut bytes, &cfg, &rows).map_err(|e| e.to_string())?;
    write_summary_csv(&mut bytes, &cfg, &summary).map_err(|e| e.to_string())?;
    let (lo, hi) = wilson_interval(summary.count as u64, summary.feasible as u64)
        .unwrap_or((f64::NAN, f64::NAN));
    let detail = format!(
        "{} trials, {} feasible, {} with a perfect matching, frequency {}, Wilson 95% [{lo:.3}, {hi:.3}]",
        summary.trials,
        summary.feasible,
        summary.count,
        summary
            .frequency
            .map_or("n/a".to_string(), |f| format!("{f:.3}")),
    );
    Ok((detail, bytes, summary.frequency))
}

fn c10() -> Outcome {
    let start = Instant::now();
    let (detail, _, freq) = run_c10()?;
    within(start, Duration::from_secs(600))?;
    ensure(freq.is_some_and(|f| f >= 0.9), || {
        format!("frequency below 0.9: {detail}")
    })?;
    Ok(format!("{detail}, {:.1?}", start.elapsed()))
}

fn c11() -> Outcome {
    let a7 = run_c7(11)?.1;
    let b7 = run_c7(11)?.1;
    ensure(a7 == b7, || "criterion 7 rerun differs".into())?;
    let a9 = run_c9()?.1;
    let b9 = run_c9()?.1;
    ensure(a9 == b9, || "criterion 9 reports differ".into())?;
    let a10 = run_c10()?.1;
    let b10 = run_c10()?.1;
    ensure(a10 == b10, || "criterion 10 CSV differs".into())?;
    Ok(format!(
        "byte-identical reruns: {} B, {} B, {} B",
        a7.len(),
        a9.len(),
        a10.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Dirac base case", c1),
        ("exhaustive 3-graph threshold", c2),
        ("barrier soundness", c3),
        ("absorber algebra", c4),
        ("k-density bound", c5),
        ("template resilience", c6),
        ("absorbing-structure robustness", c7),
        ("Aharoni-Haxell implication", c8),
        ("pipeline soundness", c9),
        ("statistical resilience", c10),
        ("determinism", c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
