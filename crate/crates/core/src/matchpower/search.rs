use super::{MatchResult, MatchStatus, Matching};
use crate::hypercore::{Hypergraph, Vertex, VertexSet};

/// Backtracking state: a vertex is "dead" once it is covered (or, for the
/// maximum-matching search, deliberately left out). An edge is available
/// while none of its vertices is dead.
struct State<'a> {
    h: &'a Hypergraph,
    inc: Vec<Vec<usize>>,
    dead: Vec<bool>,
    blocked: Vec<u32>,
    avail: Vec<u32>,
    alive: usize,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

enum Step {
    Found,
    Fail,
    Budget,
}

impl<'a> State<'a> {
    fn new(h: &'a Hypergraph, budget: u64) -> Self {
        let inc = h.incidence();
        let avail = inc.iter().map(|l| l.len() as u32).collect();
        State {
            h,
            inc,
            dead: vec![false; h.n()],
            blocked: vec![0; h.edge_count()],
            avail,
            alive: h.n(),
            chosen: Vec::new(),
            best: Vec::new(),
            nodes: 0,
            budget,
        }
    }

    fn kill(&mut self, v: usize) {
        self.dead[v] = true;
        self.alive -= 1;
        for &f in &self.inc[v] {
            self.blocked[f] += 1;
            if self.blocked[f] == 1 {
                for &u in self.h.edge(f) {
                    self.avail[u as usize] -= 1;
                }
            }
        }
    }

    fn revive(&mut self, v: usize) {
        for &f in &self.inc[v] {
            self.blocked[f] -= 1;
            if self.blocked[f] == 0 {
                for &u in self.h.edge(f) {
                    self.avail[u as usize] += 1;
                }
            }
        }
        self.dead[v] = false;
        self.alive += 1;
    }

    fn take(&mut self, e: usize) {
        for i in 0..self.h.k() {
            let v = self.h.edge(e)[i] as usize;
            self.kill(v);
        }
        self.chosen.push(e);
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
    }

    fn untake(&mut self, e: usize) {
        self.chosen.pop();
        for i in (0..self.h.k()).rev() {
            let v = self.h.edge(e)[i] as usize;
            self.revive(v);
        }
    }

    fn available_at(&self, v: usize) -> Vec<usize> {
        self.inc[v]
            .iter()
            .copied()
            .filter(|&f| self.blocked[f] == 0)
            .collect()
    }

    /// Perfect matching search: branch on the live vertex with the fewest
    /// available edges, lowest id first.
    fn perfect(&mut self) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::Budget;
        }
        if self.alive == 0 {
            return Step::Found;
        }
        let v = (0..self.dead.len())
            .filter(|&v| !self.dead[v])
            .min_by_key(|&v| (self.avail[v], v))
            .unwrap();
        if self.avail[v] == 0 {
            return Step::Fail;
        }
        for f in self.available_at(v) {
            self.take(f);
            match self.perfect() {
                Step::Found => return Step::Found,
                Step::Budget => {
                    self.untake(f);
                    return Step::Budget;
                }
                Step::Fail => self.untake(f),
            }
        }
        Step::Fail
    }

    /// Branch and bound for a maximum matching, stopping early once
    /// `target` edges are found.
    fn maximum(&mut self, target: usize) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::Budget;
        }
        if self.best.len() >= target {
            return Step::Found;
        }
        let useful = (0..self.dead.len())
            .filter(|&v| !self.dead[v] && self.avail[v] > 0)
            .count();
        if self.chosen.len() + useful / self.h.k() <= self.best.len() {
            return Step::Fail;
        }
        let Some(v) = (0..self.dead.len()).find(|&v| !self.dead[v] && self.avail[v] > 0) else {
            return Step::Fail;
        };
        for f in self.available_at(v) {
            self.take(f);
            let r = self.maximum(target);
            self.untake(f);
            match r {
                Step::Fail => {}
                other => return other,
            }
        }
        // leave v unmatched
        self.kill(v);
        let r = self.maximum(target);
        self.revive(v);
        r
    }

    fn matching(&self, edges: &[usize]) -> Matching {
        Matching::new(
            self.h.n(),
            self.h.k(),
            edges.iter().map(|&e| self.h.edge(e).to_vec()),
        )
        .expect("search only picks disjoint edges")
    }
}

/// Exact perfect-matching oracle with a node budget.
///
/// `None` status means the whole search space was explored. On budget
/// exhaustion the status is `Partial` and the largest matching seen is kept.
pub fn find_perfect_matching(h: &Hypergraph, budget: u64) -> MatchResult {
    let n = h.n();
    if !n.is_multiple_of(h.k()) {
        return MatchResult {
            status: MatchStatus::None,
            matching: Matching::empty(n, h.k()),
            uncovered: VertexSet::full(n),
            nodes_explored: 0,
        };
    }
    let mut st = State::new(h, budget);
    let status = match st.perfect() {
        Step::Found => MatchStatus::Perfect,
        Step::Fail => MatchStatus::None,
        Step::Budget => MatchStatus::Partial,
    };
    let edges = if status == MatchStatus::Perfect {
        st.chosen.clone()
    } else {
        st.best.clone()
    };
    let matching = st.matching(&edges);
    let uncovered = matching.covered().complement();
    MatchResult {
        status,
        matching,
        uncovered,
        nodes_explored: st.nodes,
    }
}

/// Perfect matching of `h[vertices]`, reported in the ids of `h`.
pub fn find_perfect_matching_on(h: &Hypergraph, vertices: &VertexSet, budget: u64) -> MatchResult {
    let (sub, map) = h.induced(vertices);
    let r = find_perfect_matching(&sub, budget);
    let back = |e: &Vec<Vertex>| e.iter().map(|&v| map[v as usize]).collect::<Vec<_>>();
    let matching = Matching::new(h.n(), h.k(), r.matching.edges().iter().map(back))
        .expect("relabelling keeps disjointness");
    let uncovered = vertices.difference(matching.covered());
    MatchResult {
        status: r.status,
        matching,
        uncovered,
        nodes_explored: r.nodes_explored,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxMode {
    /// A maximal matching by a lexicographic sweep.
    Greedy,
    /// A maximum matching, within the budget.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxMatching {
    pub matching: Matching,
    /// False when the budget ran out before optimality was proved (or when
    /// the greedy mode was used).
    pub optimal: bool,
    pub nodes: u64,
}

pub fn max_matching(h: &Hypergraph, mode: MaxMode, budget: u64) -> MaxMatching {
    match mode {
        MaxMode::Greedy => {
            let mut used = vec![false; h.n()];
            let mut edges = Vec::new();
            for e in h.edges() {
                if e.iter().all(|&v| !used[v as usize]) {
                    e.iter().for_each(|&v| used[v as usize] = true);
                    edges.push(e.to_vec());
                }
            }
            let matching = Matching::new(h.n(), h.k(), edges).expect("greedy edges are disjoint");
            MaxMatching {
                matching,
                optimal: false,
                nodes: h.edge_count() as u64,
            }
        }
        MaxMode::Exact => matching_of_size(h, usize::MAX, budget),
    }
}

/// Searches for a matching with `target` edges, or a maximum one if smaller.
/// `optimal` is true when the answer is decided: either the target was met
/// or the returned matching is maximum.
pub(crate) fn matching_of_size(h: &Hypergraph, target: usize, budget: u64) -> MaxMatching {
    let mut st = State::new(h, budget);
    let r = st.maximum(target);
    let matching = st.matching(&st.best.clone());
    MaxMatching {
        matching,
        optimal: !matches!(r, Step::Budget),
        nodes: st.nodes,
    }
}
