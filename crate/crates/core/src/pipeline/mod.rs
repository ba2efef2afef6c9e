//! The absorbing-method perfect matching constructor: pick a rich flexible
//! set `Z`, build an absorbing structure around it, cover the rest with a
//! block-partition almost-perfect matching, then absorb the leftover.
//!
//! Every success is checked by the independent perfect-matching verifier;
//! any stage that fails ends the run with a diagnostic report instead.

mod rich;

pub use rich::{choose_rich_set, degrees_into, rich_threshold, RichSet};

use crate::absorbing::AbsorberQuery;
use crate::combin::binom;
use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, Vertex, VertexSet};
use crate::matchpower::{
    blockwise_almost_perfect_on, find_perfect_matching_on, match_into_flexible, verify_exact_cover,
    verify_perfect_matching, Matching,
};
use crate::seed::derive_seed;
use crate::templates::{
    build_absorbing_structure, build_resilient_template, structure_matching_after_removal,
    AbsorbingStructure, TemplateKind, TemplateParams,
};
use crate::thresholds::conjectured_density;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Input,
    RichSet,
    Template,
    Structure,
    AlmostPerfect,
    MatchIntoZ,
    StructureMatching,
    Verify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Input => "input",
            Stage::RichSet => "rich-set",
            Stage::Template => "template",
            Stage::Structure => "structure",
            Stage::AlmostPerfect => "almost-perfect",
            Stage::MatchIntoZ => "match-into-Z",
            Stage::StructureMatching => "structure-matching",
            Stage::Verify => "verify",
        };
        f.write_str(s)
    }
}

/// Desk-scale knobs. None of them are values from the asymptotic argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineParams {
    /// `|Z|` is `round(rho · n)`, at least `k`, raised until `k | v(T)`.
    pub rho: f64,
    /// Caps the absorbable leftover at `floor(lambda · n)`.
    pub lambda: f64,
    /// Density estimate for the rich-set degree threshold.
    pub rich_density: f64,
    pub rich_trials: usize,
    /// `None` picks the lifted template when it fits in half the host and
    /// the complete template otherwise.
    pub template_kind: Option<TemplateKind>,
    pub template: TemplateParams,
    /// Largest absorber order searched per template edge.
    pub max_absorber_order: usize,
    pub absorber_budget: u64,
    /// `None` picks the multiple of k in `[2k, 12]` leaving the smallest remainder.
    pub block_size: Option<usize>,
    pub match_budget: u64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            rho: 0.2,
            lambda: 0.1,
            rich_density: 0.5,
            rich_trials: 50,
            template_kind: None,
            template: TemplateParams::default(),
            max_absorber_order: 6,
            absorber_budget: 200_000,
            block_size: None,
            match_budget: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbingSet {
    pub x: VertexSet,
    pub z: VertexSet,
    pub structure: AbsorbingStructure,
    pub rich: RichSet,
    /// Largest leftover `|W|` the set is asked to absorb.
    pub lambda_cap: usize,
    /// `(γ/2)^k · n`, compared against `|X|` but not enforced.
    pub x_bound: f64,
}

/// Vertex count of the lifted template of order `r`.
fn lifted_size(r: usize, k: usize) -> usize {
    let s = r.div_ceil(2);
    (k - 1) * 3 * s + 2 * s + r
}

/// Rich set, then a resilient template of order `|Z|`, then an absorbing
/// structure on it with `Z` as the flexible set.
pub fn build_absorbing_set(
    g: &Hypergraph,
    gamma: f64,
    params: &PipelineParams,
    seed: u64,
) -> Result<AbsorbingSet> {
    let (n, k) = (g.n(), g.k());
    let r0 = ((params.rho * n as f64).round() as usize).clamp(k, n);
    let auto = |r: usize| {
        if 2 * lifted_size(r, k) <= n {
            TemplateKind::Montgomery
        } else {
            TemplateKind::Complete
        }
    };
    let kind_of = |r: usize| params.template_kind.unwrap_or(auto(r));
    let size_of = |r: usize| match kind_of(r) {
        TemplateKind::Montgomery => lifted_size(r, k),
        TemplateKind::Complete => r,
    };
    // absorber orders are multiples of k, so k | v(T) makes k | |X|
    let r = (r0..=n).find(|&r| size_of(r) % k == 0).unwrap_or(r0);
    let kind = kind_of(r);
    let rich = choose_rich_set(
        g,
        r,
        params.rich_density,
        params.rich_trials,
        derive_seed(seed, 0),
    )
    .map_err(Error::at(Stage::RichSet))?;
    let tp = TemplateParams {
        kind,
        ..params.template.clone()
    };
    let t = build_resilient_template(r, k, &tp, derive_seed(seed, 1))
        .map_err(Error::at(Stage::Template))?;
    let mut finder = AbsorberQuery::new(n, params.max_absorber_order);
    finder.budget = params.absorber_budget;
    let z_list: Vec<Vertex> = rich.z.iter().collect();
    let structure =
        build_absorbing_structure(g, &t, &z_list, &finder).map_err(Error::at(Stage::Structure))?;
    let by_lambda = (params.lambda * n as f64).floor() as usize;
    // (k - 1)|W| < r / 2
    let by_template = (r - 1) / (2 * (k - 1));
    Ok(AbsorbingSet {
        x: structure.x.clone(),
        z: rich.z.clone(),
        lambda_cap: by_lambda.min(by_template),
        x_bound: (gamma / 2.0).powi(k as i32) * n as f64,
        structure,
        rich,
    })
}

/// Matches `w` into `Z` and completes with the structure's matching on what
/// is left; the result covers exactly `X ∪ W`.
pub fn absorb_and_complete(
    g: &Hypergraph,
    a: &AbsorbingSet,
    w: &VertexSet,
    budget: u64,
) -> Result<Matching> {
    if !w.is_disjoint(&a.x) {
        return Err(Error::Precondition("W must avoid the absorbing set".into()));
    }
    if w.len() > a.lambda_cap {
        return Err(Error::Precondition(format!(
            "|W| = {} exceeds the cap {}",
            w.len(),
            a.lambda_cap
        )));
    }
    if !(a.x.len() + w.len()).is_multiple_of(g.k()) {
        return Err(Error::Precondition("|X ∪ W| is not divisible by k".into()));
    }
    let m1 = match_into_flexible(g, w, &a.z, budget).map_err(Error::at(Stage::MatchIntoZ))?;
    let used = m1.covered().intersection(&a.z);
    let m2 = structure_matching_after_removal(g, &a.structure, &used)
        .map_err(Error::at(Stage::StructureMatching))?;
    let m = m1.merge(&m2)?;
    verify_exact_cover(g, m.edges(), &a.x.union(w))
        .map_err(|d| Error::at(Stage::Verify)(Error::Shape(d.to_string())))?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Counters {
    pub rich_set_size: usize,
    pub rich_trials: usize,
    pub template_kind: Option<TemplateKind>,
    pub template_vertices: usize,
    pub template_edges: usize,
    pub nontrivial_absorbers: usize,
    pub max_absorber_order: usize,
    pub x_size: usize,
    pub x_bound: f64,
    pub x_bound_met: bool,
    pub lambda_cap: usize,
    pub block_size: usize,
    pub failed_blocks: usize,
    pub leftover: usize,
    pub retries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub version: u32,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub gamma: f64,
    pub min_degree: u64,
    /// `⌈(conjectured density + γ) · C(n-d, k-d)⌉`.
    pub degree_target: u64,
    pub degree_condition_met: bool,
    pub stages: Vec<StageRecord>,
    pub counters: Counters,
    pub success: bool,
    pub failure_stage: Option<Stage>,
    pub matching: Option<Vec<Vec<Vertex>>>,
}

impl PipelineReport {
    fn pass(&mut self, stage: Stage, detail: impl Into<String>) {
        self.stages.push(StageRecord {
            stage,
            ok: true,
            detail: detail.into(),
        });
    }

    fn fail(mut self, stage: Stage, detail: impl Into<String>) -> Self {
        self.stages.push(StageRecord {
            stage,
            ok: false,
            detail: detail.into(),
        });
        self.failure_stage = Some(stage);
        self
    }

    fn fail_with(self, e: Error) -> Self {
        match e {
            Error::Stage { stage, source } => self.fail(stage, source.to_string()),
            other => self.fail(Stage::Input, other.to_string()),
        }
    }

    /// Pretty JSON; byte-identical for identical inputs.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Block size for `m` vertices: the multiple of k in `[2k, max(2k, 12)]`
/// leaving the smallest remainder, ties to the smaller size.
pub fn adaptive_block_size(m: usize, k: usize) -> usize {
    (2..)
        .map(|i| i * k)
        .take_while(|&q| q <= (2 * k).max(12))
        .min_by_key(|&q| (m % q, q))
        .expect("2k is always a candidate")
}

/// Runs the whole constructor. Never returns an unverified success.
pub fn dirac_perfect_matching(
    g: &Hypergraph,
    d: usize,
    gamma: f64,
    params: &PipelineParams,
    seed: u64,
) -> PipelineReport {
    let (n, k) = (g.n(), g.k());
    let mut rep = PipelineReport {
        version: REPORT_VERSION,
        seed,
        n,
        k,
        d,
        gamma,
        min_degree: 0,
        degree_target: 0,
        degree_condition_met: false,
        stages: Vec::new(),
        counters: Counters::default(),
        success: false,
        failure_stage: None,
        matching: None,
    };
    if n % k != 0 {
        return rep.fail(Stage::Input, format!("k = {k} does not divide n = {n}"));
    }
    match (g.min_d_degree(d), conjectured_density(d, k)) {
        (Ok(md), Ok(mu)) => {
            let full = binom((n - d) as u64, (k - d) as u64) as f64;
            let density = *mu.numer() as f64 / *mu.denom() as f64;
            rep.min_degree = md.value;
            rep.degree_target = ((density + gamma) * full).ceil() as u64;
            rep.degree_condition_met = md.value >= rep.degree_target;
            rep.pass(
                Stage::Input,
                format!(
                    "min {d}-degree {} against target {}",
                    md.value, rep.degree_target
                ),
            );
        }
        (Err(e), _) | (_, Err(e)) => return rep.fail(Stage::Input, e.to_string()),
    }

    let a = match build_absorbing_set(g, gamma, params, derive_seed(seed, 0)) {
        Ok(a) => a,
        Err(e) => return rep.fail_with(e),
    };
    let c = &mut rep.counters;
    c.rich_set_size = a.z.len();
    c.rich_trials = a.rich.trials_used;
    c.template_kind = Some(match a.structure.template.provenance {
        crate::templates::Provenance::Complete => TemplateKind::Complete,
        crate::templates::Provenance::Montgomery { .. } => TemplateKind::Montgomery,
    });
    c.template_vertices = a.structure.template.vertex_count();
    c.template_edges = a.structure.template.edge_count();
    c.nontrivial_absorbers = a
        .structure
        .placements
        .iter()
        .filter(|p| p.order() > 0)
        .count();
    c.max_absorber_order = a.structure.max_order();
    c.x_size = a.x.len();
    c.x_bound = a.x_bound;
    c.x_bound_met = a.x.len() as f64 <= a.x_bound;
    c.lambda_cap = a.lambda_cap;
    let template_detail = format!(
        "{} vertices, {} edges",
        c.template_vertices, c.template_edges
    );
    rep.pass(
        Stage::RichSet,
        format!("|Z| = {} after {} trials", a.z.len(), a.rich.trials_used),
    );
    rep.pass(Stage::Template, template_detail);
    rep.pass(Stage::Structure, format!("|X| = {}", a.x.len()));

    let rest = a.x.complement();
    let mut block_matching = Matching::empty(n, k);
    let mut leftover = rest.clone();
    let q = params
        .block_size
        .unwrap_or_else(|| adaptive_block_size(rest.len(), k));
    rep.counters.block_size = q;
    if rest.len() < q {
        let whole = find_perfect_matching_on(g, &rest, params.match_budget);
        if whole.is_perfect() {
            leftover = VertexSet::empty(n);
            block_matching = whole.matching;
        }
    } else {
        for attempt in 0..2u64 {
            let out = match blockwise_almost_perfect_on(
                g,
                &rest,
                q,
                derive_seed(seed, 1 + attempt),
                params.match_budget,
            ) {
                Ok(o) => o,
                Err(e) => return rep.fail(Stage::AlmostPerfect, e.to_string()),
            };
            rep.counters.failed_blocks = out.failed_blocks.len();
            block_matching = out.matching;
            leftover = out.uncovered;
            // the vertices outside every block get one more chance as a block of their own
            let in_blocks = VertexSet::new(n, out.blocks.iter().flatten().copied())
                .expect("block ids are in range");
            let remainder = rest.difference(&in_blocks);
            if remainder.len() >= k {
                let tail = find_perfect_matching_on(g, &remainder, params.match_budget);
                if tail.is_perfect() {
                    leftover = leftover.difference(&remainder);
                    block_matching = block_matching
                        .merge(&tail.matching)
                        .expect("tail is disjoint from the blocks");
                }
            }
            if leftover.len() <= a.lambda_cap {
                break;
            }
            if attempt == 0 {
                rep.counters.retries += 1;
            }
        }
    }
    rep.counters.leftover = leftover.len();
    if leftover.len() > a.lambda_cap {
        return rep.fail(
            Stage::AlmostPerfect,
            format!(
                "{} vertices left over, more than the cap {}",
                leftover.len(),
                a.lambda_cap
            ),
        );
    }
    rep.pass(
        Stage::AlmostPerfect,
        format!(
            "{} edges, {} left over",
            block_matching.len(),
            leftover.len()
        ),
    );

    let absorbed = match absorb_and_complete(g, &a, &leftover, params.match_budget) {
        Ok(m) => m,
        Err(e) => return rep.fail_with(e),
    };
    rep.pass(
        Stage::MatchIntoZ,
        format!("{} leftover vertices matched into Z", leftover.len()),
    );
    rep.pass(
        Stage::StructureMatching,
        format!("{} edges cover X ∪ W", absorbed.len()),
    );
    let full = match block_matching.merge(&absorbed) {
        Ok(m) => m,
        Err(e) => return rep.fail(Stage::Verify, e.to_string()),
    };
    if let Err(d) = verify_perfect_matching(g, full.edges()) {
        return rep.fail(Stage::Verify, d.to_string());
    }
    rep.pass(
        Stage::Verify,
        format!("perfect matching with {} edges", full.len()),
    );
    rep.success = true;
    rep.matching = Some(full.into_edges());
    rep
}
