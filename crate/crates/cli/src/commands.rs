use crate::output::{emit, write_text};
use crate::{record, CliError, CliResult, Global};
use clap::{Args, Subcommand, ValueEnum};
use hyperdirac::absorbing::{
    contract_absorber, contracted_absorber_decomposition, find_rooted_absorber,
    find_sparse_r_absorber, is_k_sparse, read_jsonl, verify_absorber, verify_r_absorber,
    write_jsonl, AbsorberQuery, AbsorberRecord, ContractibleAbsorber, SparseQuery,
};
use hyperdirac::hypercore::khg;
use hyperdirac::lab::{run_experiment, sample_hk, ExperimentConfig, ExperimentKind};
use hyperdirac::matchpower::{
    find_perfect_matching, parse_matching, verify_matching, verify_perfect_matching, DEFAULT_BUDGET,
};
use hyperdirac::pipeline::{dirac_perfect_matching, PipelineParams};
use hyperdirac::templates::{
    build_resilient_template, verify_resilient_template, ResilienceMode, ResilientTemplate,
    TemplateKind, TemplateParams, TemplateSidecar,
};
use hyperdirac::thresholds::{
    append_mdk_csv, exact_dirac_threshold, parity_barrier, space_barrier, write_witness,
};
use hyperdirac::{Hypergraph, MatchStatus, Vertex};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Binomial random k-graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
    },
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// All k-sets meeting a set of n/k - 1 vertices.
    SpaceBarrier {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    /// k-sets meeting a fixed set in an even number of vertices.
    ParityBarrier {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum AbsorberAction {
    /// Search for an absorber on the given roots; appends a JSON line.
    Find {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated root vertices (k of them, or rk with --q).
        #[arg(long, value_delimiter = ',', required = true)]
        roots: Vec<Vertex>,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long, default_value_t = 0)]
        min_order: usize,
        /// Require K-sparsity; with --q this is the pattern girth.
        #[arg(long)]
        sparse: Option<usize>,
        /// Build a sparse r-absorber on a pattern with edges of this size.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value_t = 32)]
        trials: usize,
    },
    /// Check every record of a JSON-lines absorber file against a host.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        absorbers: PathBuf,
        #[arg(long)]
        sparse: Option<usize>,
    },
    /// Contract a contractible absorber given as JSON.
    Contract {
        #[arg(long)]
        contractible: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindChoice {
    Montgomery,
    Complete,
}

#[derive(Debug, Subcommand)]
pub enum TemplateAction {
    /// Build a template; writes `<out>.khg` and `<out>.json`.
    Build {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "montgomery")]
        kind: KindChoice,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Removals checked in sampled mode.
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
    /// Re-verify a stored template.
    Verify(TemplateVerifyArgs),
}

#[derive(Debug, Args)]
pub struct TemplateVerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub sidecar: PathBuf,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: Mode,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
}

#[derive(Debug, Subcommand)]
pub enum PipelineAction {
    /// Writes the JSON report to --out (or prints it) and the matching to `<out>.matching`.
    Run {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        gamma: f64,
        /// Parameter file, JSON or TOML by extension.
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentChoice {
    Resilience,
    Inheritance,
    Load,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("what").required(true).args(["matching", "absorbers", "template"]))]
pub struct VerifyArgs {
    /// Host graph for matchings and absorbers.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub matching: Option<PathBuf>,
    /// Require the matching to cover every vertex.
    #[arg(long)]
    pub perfect: bool,
    #[arg(long)]
    pub absorbers: Option<PathBuf>,
    #[arg(long)]
    pub sparse: Option<usize>,
    /// Template .khg; needs --sidecar.
    #[arg(long, requires = "sidecar")]
    pub template: Option<PathBuf>,
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: Mode,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
}

fn seed(g: &Global) -> u64 {
    g.seed.unwrap_or(0)
}

fn budget(g: &Global) -> u64 {
    g.budget.unwrap_or(DEFAULT_BUDGET)
}

fn read_graph(path: &Path) -> CliResult<Hypergraph> {
    khg::read_path(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn gen(g: &Global, kind: GenKind) -> CliResult {
    let (graph, label) = match kind {
        GenKind::Random { n, k, p } => (sample_hk(n, k, p, seed(g))?, "random"),
        GenKind::Complete { n, k } => (Hypergraph::complete(n, k), "complete"),
        GenKind::SpaceBarrier { n, k, d } => (space_barrier(n, k, d)?.graph, "space-barrier"),
        GenKind::ParityBarrier { n, k, d } => (parity_barrier(n, k, d)?.graph, "parity-barrier"),
    };
    write_text(g.out.as_deref(), &khg::to_string(&graph))?;
    if let Some(out) = &g.out {
        emit(
            g.format,
            record! {
                "graph" => label,
                "n" => graph.n(),
                "k" => graph.k(),
                "edges" => graph.edge_count(),
                "file" => out.display().to_string(),
            },
        )?;
    }
    Ok(())
}

pub fn pm(g: &Global, input: &Path) -> CliResult {
    let h = read_graph(input)?;
    let res = find_perfect_matching(&h, budget(g));
    let status = match res.status {
        MatchStatus::Perfect => "perfect",
        MatchStatus::None => "none",
        MatchStatus::Partial => "budget",
    };
    let mut rec = record! {
        "status" => status,
        "n" => h.n(),
        "k" => h.k(),
        "nodes" => res.nodes_explored,
    };
    if res.status != MatchStatus::Perfect {
        emit(g.format, rec)?;
        return Err(CliError::Failed(format!("no perfect matching ({status})")));
    }
    verify_perfect_matching(&h, res.matching.edges())
        .map_err(|d| CliError::Failed(format!("search returned a bad matching: {d}")))?;
    let out = g
        .out
        .clone()
        .unwrap_or_else(|| with_suffix(input, ".matching"));
    std::fs::write(&out, res.matching.to_text())?;
    rec.insert("file".into(), out.display().to_string().into());
    emit(g.format, rec)
}

pub fn mdk(g: &Global, n: usize, k: usize, d: usize, witness: Option<&Path>) -> CliResult {
    let start = Instant::now();
    let rec = exact_dirac_threshold(n, k, d)?;
    let seconds = start.elapsed().as_secs_f64();
    if let Some(w) = witness {
        write_witness(&rec, w)?;
    }
    let table = g.out.clone().unwrap_or_else(|| PathBuf::from("mdk.csv"));
    let wname = witness.map(|w| w.display().to_string());
    append_mdk_csv(&table, &rec, wname.as_deref(), Some(seconds))?;
    let ratio = rec.ratio();
    emit(
        g.format,
        record! {
            "n" => n,
            "k" => k,
            "d" => d,
            "m" => rec.m_value,
            "ratio" => format!("{}/{}", ratio.numer(), ratio.denom()),
            "graphs_enumerated" => rec.graphs_enumerated,
            "table" => table.display().to_string(),
        },
    )
}

pub fn absorber(g: &Global, action: AbsorberAction) -> CliResult {
    match action {
        AbsorberAction::Find {
            input,
            roots,
            max_order,
            min_order,
            sparse,
            q,
            trials,
        } => {
            let h = read_graph(&input)?;
            let a = match q {
                Some(q) => {
                    let mut sq = SparseQuery::new(h.n(), sparse.unwrap_or(3), q, seed(g));
                    sq.trials = trials;
                    if let Some(b) = g.budget {
                        sq.pm_budget = b;
                    }
                    find_sparse_r_absorber(&h, &roots, &sq)?
                }
                None => {
                    let mut aq = AbsorberQuery::new(h.n(), max_order);
                    aq.min_order = min_order;
                    aq.require_sparse = sparse;
                    if let Some(b) = g.budget {
                        aq.budget = b;
                    }
                    find_rooted_absorber(&h, &roots, &aq)?
                }
            };
            let line = AbsorberRecord::from_absorber(&a, sparse.or(q.map(|_| 3)));
            match &g.out {
                Some(p) => {
                    let f = std::fs::OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(p)?;
                    write_jsonl(&[line], f)?;
                    emit(
                        g.format,
                        record! {
                            "order" => a.order(),
                            "edges" => a.edge_count(),
                            "roots" => a.roots.len(),
                            "file" => p.display().to_string(),
                        },
                    )
                }
                None => Ok(write_jsonl(&[line], std::io::stdout().lock())?),
            }
        }
        AbsorberAction::Verify {
            input,
            absorbers,
            sparse,
        } => verify_absorbers(g, &input, &absorbers, sparse),
        AbsorberAction::Contract { contractible } => {
            let text = std::fs::read_to_string(&contractible)?;
            let c: ContractibleAbsorber = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", contractible.display())))?;
            let w = contract_absorber(&c);
            let split = contracted_absorber_decomposition(&w);
            let json = serde_json::to_string_pretty(&w).map_err(hyperdirac::Error::from)?;
            write_text(g.out.as_deref(), &(json + "\n"))?;
            if g.out.is_some() {
                emit(
                    g.format,
                    record! {
                        "vertices" => w.vertex_count(),
                        "edges" => w.edges.len(),
                        "is_absorber" => split.is_some(),
                    },
                )?;
            }
            Ok(())
        }
    }
}

fn verify_absorbers(g: &Global, input: &Path, file: &Path, sparse: Option<usize>) -> CliResult {
    let h = read_graph(input)?;
    let records = read_jsonl(std::io::BufReader::new(std::fs::File::open(file)?))?;
    let mut first_bad: Option<String> = None;
    for (i, r) in records.iter().enumerate() {
        let problem = match r.to_absorber() {
            Err(e) => Some(e.to_string()),
            Ok(a) => {
                let axioms = if a.roots.len() == h.k() {
                    verify_absorber(&a, &h)
                } else {
                    verify_r_absorber(&a, &h)
                };
                match (axioms, sparse.or(r.sparsity_k)) {
                    (Err(d), _) => Some(d.to_string()),
                    (Ok(()), Some(big_k)) if !is_k_sparse(&a, big_k)? => {
                        Some(format!("not {big_k}-sparse"))
                    }
                    _ => None,
                }
            }
        };
        if let Some(p) = problem {
            first_bad.get_or_insert(format!("record {}: {p}", i + 1));
        }
    }
    emit(
        g.format,
        record! {
            "records" => records.len(),
            "valid" => first_bad.is_none(),
            "defect" => first_bad.clone(),
        },
    )?;
    match first_bad {
        Some(p) => Err(CliError::Failed(p)),
        None => Ok(()),
    }
}

fn resilience_mode(g: &Global, mode: Mode, trials: usize) -> Option<ResilienceMode> {
    match mode {
        Mode::Exhaustive => Some(ResilienceMode::Exhaustive),
        Mode::Sampled => Some(ResilienceMode::Sampled {
            trials,
            seed: seed(g),
        }),
        Mode::None => None,
    }
}

pub fn template(g: &Global, action: TemplateAction) -> CliResult {
    match action {
        TemplateAction::Build {
            r,
            k,
            mode,
            kind,
            max_degree,
            trials,
        } => {
            let params = TemplateParams {
                kind: match kind {
                    KindChoice::Montgomery => TemplateKind::Montgomery,
                    KindChoice::Complete => TemplateKind::Complete,
                },
                max_degree,
                ..TemplateParams::default()
            };
            let t = build_resilient_template(r, k, &params, seed(g))?;
            let check = match resilience_mode(g, mode, trials) {
                Some(m) => Some(verify_resilient_template(&t, m)?),
                None => None,
            };
            let prefix = g.out.clone().unwrap_or_else(|| PathBuf::from("template"));
            let (graph_path, side_path) =
                (with_suffix(&prefix, ".khg"), with_suffix(&prefix, ".json"));
            khg::write_path(&t.graph, &graph_path)?;
            let side = t.sidecar(check.clone());
            let json = serde_json::to_string_pretty(&side).map_err(hyperdirac::Error::from)?;
            std::fs::write(&side_path, json + "\n")?;
            let holds = check.as_ref().map(|c| c.holds);
            emit(
                g.format,
                record! {
                    "vertices" => t.vertex_count(),
                    "edges" => t.edge_count(),
                    "l_effective" => t.l_effective(),
                    "verified" => holds,
                    "exhaustive" => check.as_ref().map(|c| c.exhaustive),
                    "graph" => graph_path.display().to_string(),
                    "sidecar" => side_path.display().to_string(),
                },
            )?;
            match check {
                Some(c) if !c.holds => Err(CliError::Failed(format!(
                    "template fails on removal {:?}",
                    c.violating
                ))),
                _ => Ok(()),
            }
        }
        TemplateAction::Verify(args) => verify_template(g, &args),
    }
}

fn verify_template(g: &Global, args: &TemplateVerifyArgs) -> CliResult {
    let graph = read_graph(&args.input)?;
    let text = std::fs::read_to_string(&args.sidecar)?;
    let side: TemplateSidecar = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.sidecar.display())))?;
    let t = ResilientTemplate::from_parts(graph, &side)?;
    let mode = resilience_mode(g, args.mode, args.trials)
        .ok_or_else(|| CliError::Usage("template verify needs a verification mode".into()))?;
    let c = verify_resilient_template(&t, mode)?;
    emit(
        g.format,
        record! {
            "holds" => c.holds,
            "exhaustive" => c.exhaustive,
            "removals_checked" => c.removals_checked,
            "violating" => c.violating.clone(),
        },
    )?;
    if c.holds {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "template fails on removal {:?}",
            c.violating
        )))
    }
}

fn read_params(path: &Path) -> CliResult<PipelineParams> {
    let text = std::fs::read_to_string(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        toml::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn pipeline(g: &Global, action: PipelineAction) -> CliResult {
    let PipelineAction::Run {
        input,
        d,
        gamma,
        params,
    } = action;
    let h = read_graph(&input)?;
    let mut p = match &params {
        Some(path) => read_params(path)?,
        None => PipelineParams::default(),
    };
    if let Some(b) = g.budget {
        p.match_budget = b;
    }
    let report = dirac_perfect_matching(&h, d, gamma, &p, seed(g));
    let json = report.to_json()?;
    write_text(g.out.as_deref(), &(json + "\n"))?;
    if let (Some(out), Some(m)) = (&g.out, &report.matching) {
        let text: String = m
            .iter()
            .map(|e| {
                let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
                line.join(" ") + "\n"
            })
            .collect();
        std::fs::write(with_suffix(out, ".matching"), text)?;
    }
    if report.success {
        Ok(())
    } else {
        let stage = report
            .failure_stage
            .map_or("unknown".to_string(), |s| s.to_string());
        Err(CliError::Failed(format!(
            "pipeline failed at the {stage} stage"
        )))
    }
}

pub fn experiment(g: &Global, kind: ExperimentChoice, config: &Path) -> CliResult {
    let mut cfg = ExperimentConfig::read_path(config)
        .map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
    cfg.kind = match kind {
        ExperimentChoice::Resilience => ExperimentKind::Resilience,
        ExperimentChoice::Inheritance => ExperimentKind::Inheritance,
        ExperimentChoice::Load => ExperimentKind::Load,
    };
    if let Some(s) = g.seed {
        cfg.master_seed = s;
    }
    if let Some(b) = g.budget {
        cfg.budget = b;
    }
    if let Some(o) = &g.out {
        cfg.output = o.clone();
    }
    let files = run_experiment(&cfg)?;
    let files: Vec<String> = files.iter().map(|f| f.display().to_string()).collect();
    emit(
        g.format,
        record! {
            "experiment" => cfg.name,
            "trials" => cfg.trials,
            "files" => files.join(";"),
        },
    )
}

pub fn verify(g: &Global, args: &VerifyArgs) -> CliResult {
    let host = || {
        args.input
            .as_deref()
            .ok_or_else(|| CliError::Usage("--in is required for this check".into()))
    };
    if let Some(m) = &args.matching {
        let h = read_graph(host()?)?;
        let text = std::fs::read_to_string(m)?;
        let edges = parse_matching(&text)?;
        let res = if args.perfect {
            verify_perfect_matching(&h, &edges)
        } else {
            verify_matching(&h, &edges)
        };
        emit(
            g.format,
            record! {
                "edges" => edges.len(),
                "valid" => res.is_ok(),
                "defect" => res.as_ref().err().map(|d| d.to_string()),
            },
        )?;
        return res.map_err(|d| CliError::Failed(d.to_string()));
    }
    if let Some(a) = &args.absorbers {
        return verify_absorbers(g, host()?, a, args.sparse);
    }
    let template = args.template.clone().expect("clap enforces one target");
    verify_template(
        g,
        &TemplateVerifyArgs {
            input: template,
            sidecar: args.sidecar.clone().expect("clap requires --sidecar"),
            mode: args.mode,
            trials: args.trials,
        },
    )
}
