//! Stream assignment: decision, construction, verification.
//!
//! A *stream assignment* maps every path to one of `n̄` streams so that each
//! sink's paths carry pairwise-distinct streams (saturation at max-flow rate)
//! and every stream contaminating a sink's paths is one the sink decodes
//! anyway. The second condition is what makes a concrete linear code exist.
//!
//! [`solve`] runs the full pipeline: decompose, analyze contamination, build
//! the coloring graph per candidate `n̄`, reject by clique number where
//! possible (polynomially, and conclusively for perfect graphs), otherwise
//! color exactly and map colors back to streams. [`brute_force_assign`] is the
//! independent oracle the pipeline is tested against.

use crate::coloring::{color_exact, two_colorable, ColoringError};
use crate::colorgraph::{
    build_coloring_graph, is_berge, max_clique_size, BergeVerdict, DEFAULT_HOLE_WORK,
};
use crate::contamination::{contamination_sets, ContaminationReport};
use crate::flows::{decompose, validate_decomposition, PathDecomposition, PathId};
use crate::netgraph::NetworkInstance;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamAssignment {
    pub nbar: usize,
    /// Stream per path, 0-based.
    pub f: BTreeMap<PathId, usize>,
    pub rates: Vec<usize>,
}

impl StreamAssignment {
    pub fn new(nbar: usize, f: BTreeMap<PathId, usize>) -> Self {
        let mut rates: Vec<usize> = Vec::new();
        for p in f.keys() {
            if p.sink >= rates.len() {
                rates.resize(p.sink + 1, 0);
            }
            rates[p.sink] = rates[p.sink].max(p.slot + 1);
        }
        StreamAssignment { nbar, f, rates }
    }

    /// The streams sink `j` decodes.
    pub fn sink_streams(&self, j: usize) -> BTreeSet<usize> {
        self.f
            .iter()
            .filter(|(p, _)| p.sink == j)
            .map(|(_, &s)| s)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Unassigned { path: PathId },
    StreamOutOfRange { path: PathId, stream: usize },
    DuplicateStream { sink: usize, stream: usize },
    /// Stream `stream` can mix into sink `sink`'s reception via path
    /// `contaminant`, but the sink decodes no path carrying it.
    UndecodableContaminant { sink: usize, stream: usize, contaminant: PathId },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unassigned { path } => write!(out, "path {path} has no stream"),
            Violation::StreamOutOfRange { path, stream } => {
                write!(out, "path {path} uses stream {} beyond the budget", stream + 1)
            }
            Violation::DuplicateStream { sink, stream } => write!(
                out,
                "sink {} assigns stream {} to more than one path",
                sink + 1,
                stream + 1
            ),
            Violation::UndecodableContaminant { sink, stream, contaminant } => write!(
                out,
                "sink {} cannot decode stream {} mixed in by path {contaminant}",
                sink + 1,
                stream + 1
            ),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("{got} paths exceed the brute-force cap of {cap}")]
    PathCap { got: usize, cap: usize },
    #[error("stream budget {got} exceeds the brute-force cap of {cap}")]
    NbarCap { got: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Checks saturation (distinct streams per sink) and decodability (every
/// contaminating stream is one of the sink's own). Empty list = valid.
pub fn verify_assignment(
    g: &NetworkInstance,
    d: &PathDecomposition,
    r: &ContaminationReport,
    a: &StreamAssignment,
) -> Result<Vec<Violation>, SolverError> {
    if d.per_sink.len() != g.sinks.len() {
        return Err(SolverError::Shape("decomposition does not match the network".into()));
    }
    if r.m.len() != g.sinks.len() {
        return Err(SolverError::Shape("contamination report does not match".into()));
    }
    if a.nbar == 0 {
        return Err(SolverError::Shape("stream budget must be at least 1".into()));
    }
    let mut violations = Vec::new();
    for p in d.ids() {
        match a.f.get(&p) {
            None => violations.push(Violation::Unassigned { path: p }),
            Some(&s) if s >= a.nbar => {
                violations.push(Violation::StreamOutOfRange { path: p, stream: s })
            }
            _ => {}
        }
    }
    let mut colors: Vec<BTreeSet<usize>> = Vec::with_capacity(d.per_sink.len());
    for j in 0..d.per_sink.len() {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for k in 0..d.n_j(j) {
            if let Some(&s) = a.f.get(&PathId::new(j, k)) {
                if s < a.nbar {
                    *count.entry(s).or_insert(0) += 1;
                }
            }
        }
        for (&s, &c) in &count {
            if c > 1 {
                violations.push(Violation::DuplicateStream { sink: j, stream: s });
            }
        }
        colors.push(count.into_keys().collect());
    }
    // Contamination flows outward: path p's stream rides onto every path in
    // its set, so each sink reached there must decode p's stream.
    for j in 0..d.per_sink.len() {
        for p in d.ids() {
            if p.sink == j {
                continue;
            }
            let reaches = r.sets.get(&p).is_some_and(|set| set.iter().any(|q| q.sink == j));
            if !reaches {
                continue;
            }
            if let Some(&s) = a.f.get(&p) {
                if s < a.nbar && !colors[j].contains(&s) {
                    violations.push(Violation::UndecodableContaminant {
                        sink: j,
                        stream: s,
                        contaminant: p,
                    });
                }
            }
        }
    }
    Ok(violations)
}

pub const BRUTE_PATH_CAP: usize = 10;
pub const BRUTE_NBAR_CAP: usize = 4;

/// Exhaustive first-fit search over all `n̄^|paths|` assignments in
/// lexicographic order (paths sink-major, streams ascending). The pruning
/// only discards branches no completion can save, so the first assignment
/// found is exactly the one plain enumeration would return.
pub fn brute_force_assign_with_cap(
    d: &PathDecomposition,
    r: &ContaminationReport,
    nbar: usize,
    path_cap: usize,
    nbar_cap: usize,
) -> Result<Option<StreamAssignment>, SolverError> {
    if d.total_paths() > path_cap {
        return Err(SolverError::PathCap { got: d.total_paths(), cap: path_cap });
    }
    if nbar > nbar_cap {
        return Err(SolverError::NbarCap { got: nbar, cap: nbar_cap });
    }
    if nbar < d.n() {
        return Ok(None);
    }
    let ids = d.ids();
    let sinks = d.per_sink.len();
    // targets[p] = foreign sinks p's stream rides onto; each must decode it.
    let targets: BTreeMap<PathId, Vec<usize>> = ids
        .iter()
        .map(|&p| {
            let js: Vec<usize> = (0..sinks)
                .filter(|&j| {
                    j != p.sink
                        && r.sets
                            .get(&p)
                            .is_some_and(|set| set.iter().any(|q| q.sink == j))
                })
                .collect();
            (p, js)
        })
        .collect();

    struct Dfs<'a> {
        d: &'a PathDecomposition,
        ids: &'a [PathId],
        nbar: usize,
        targets: &'a BTreeMap<PathId, Vec<usize>>,
        f: BTreeMap<PathId, usize>,
        colors: Vec<BTreeSet<usize>>,
    }

    impl Dfs<'_> {
        fn go(&mut self, idx: usize) -> bool {
            if idx == self.ids.len() {
                return true;
            }
            let p = self.ids[idx];
            let completes = p.slot + 1 == self.d.n_j(p.sink);
            for s in 0..self.nbar {
                if self.colors[p.sink].contains(&s) {
                    continue;
                }
                // Sinks below p.sink are fully assigned: their stream sets
                // are final, so landing an unknown stream there is fatal now.
                if self.targets[&p].iter().any(|&j| j < p.sink && !self.colors[j].contains(&s))
                {
                    continue;
                }
                self.f.insert(p, s);
                self.colors[p.sink].insert(s);
                let ok = if completes {
                    // p.sink's stream set just became final; every already
                    // assigned stream landing here must be covered by it.
                    self.f.iter().all(|(q, fq)| {
                        !self.targets[q].contains(&p.sink)
                            || self.colors[p.sink].contains(fq)
                    })
                } else {
                    true
                };
                if ok && self.go(idx + 1) {
                    return true;
                }
                self.f.remove(&p);
                self.colors[p.sink].remove(&s);
            }
            false
        }
    }

    let mut dfs = Dfs {
        d,
        ids: &ids,
        nbar,
        targets: &targets,
        f: BTreeMap::new(),
        colors: vec![BTreeSet::new(); sinks],
    };
    if dfs.go(0) {
        Ok(Some(StreamAssignment::new(nbar, dfs.f)))
    } else {
        Ok(None)
    }
}

pub fn brute_force_assign(
    d: &PathDecomposition,
    r: &ContaminationReport,
    nbar: usize,
) -> Result<Option<StreamAssignment>, SolverError> {
    brute_force_assign_with_cap(d, r, nbar, BRUTE_PATH_CAP, BRUTE_NBAR_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbarPolicy {
    Fixed(usize),
    /// Try `n`, `n+1`, …, `n + extra`.
    Auto { extra: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub nbar: NbarPolicy,
    pub seed: u64,
    pub deadline: Option<Instant>,
    /// Expansion budget for the Berge diagnostic.
    pub hole_work: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            nbar: NbarPolicy::Auto { extra: 3 },
            seed: 0,
            deadline: None,
            hole_work: DEFAULT_HOLE_WORK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solution,
    Infeasible,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptResult {
    Solution,
    Infeasible { reason: String },
    Timeout,
}

/// Diagnostics for one candidate stream budget.
#[derive(Debug, Clone, PartialEq)]
pub struct NbarAttempt {
    pub nbar: usize,
    /// Clique number of the coloring graph; `None` when the budget was
    /// rejected before the graph was built.
    pub omega: Option<usize>,
    pub berge: Option<BergeVerdict>,
    pub result: AttemptResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub outcome: Outcome,
    /// Largest sink rate (the stream-count floor).
    pub n: usize,
    pub rates: Vec<usize>,
    pub nbar_used: Option<usize>,
    pub assignment: Option<StreamAssignment>,
    pub m: Vec<Vec<usize>>,
    pub attempts: Vec<NbarAttempt>,
}

/// End-to-end decision and construction. `paths_override` replaces the
/// canonical decomposition (it must be valid for `g`). Never panics on
/// well-formed inputs; timeouts surface as `Outcome::Unknown`.
pub fn solve(
    g: &NetworkInstance,
    paths_override: Option<&PathDecomposition>,
    opts: SolveOptions,
) -> SolveReport {
    let d = match paths_override {
        Some(d) => {
            validate_decomposition(g, d).expect("override decomposition is valid");
            d.clone()
        }
        None => decompose(g),
    };
    let r = contamination_sets(g, &d);
    let n = d.n();
    let rates = d.rates();
    let candidates: Vec<usize> = match opts.nbar {
        NbarPolicy::Fixed(k) => vec![k],
        NbarPolicy::Auto { extra } => (n..=n + extra).collect(),
    };
    let mut attempts = Vec::new();
    let mut outcome = Outcome::Infeasible;
    let mut nbar_used = None;
    let mut assignment = None;
    for nbar in candidates {
        if nbar < n {
            attempts.push(NbarAttempt {
                nbar,
                omega: None,
                berge: None,
                result: AttemptResult::Infeasible {
                    reason: format!("budget below the largest sink rate {n}"),
                },
            });
            continue;
        }
        let cg = build_coloring_graph(&d, &r, nbar).expect("nbar >= n");
        let omega = max_clique_size(&cg).expect("graph built here is well-formed");
        let berge = is_berge(&cg.graph, opts.hole_work);
        if omega > nbar {
            // A clique needs omega colors; no search required. For Berge
            // graphs this bound is tight, making the rejection a proof of
            // chromatic infeasibility by a polynomial certificate.
            attempts.push(NbarAttempt {
                nbar,
                omega: Some(omega),
                berge: Some(berge),
                result: AttemptResult::Infeasible {
                    reason: format!("clique of {omega} vertices exceeds the budget"),
                },
            });
            continue;
        }
        let colored = if nbar == 2 {
            Ok(two_colorable(&cg.graph))
        } else {
            color_exact(&cg.graph, nbar, opts.seed, opts.deadline)
        };
        match colored {
            Err(ColoringError::Timeout) => {
                attempts.push(NbarAttempt {
                    nbar,
                    omega: Some(omega),
                    berge: Some(berge),
                    result: AttemptResult::Timeout,
                });
                outcome = Outcome::Unknown;
                break;
            }
            Err(e) => unreachable!("budget {nbar} within limits: {e}"),
            Ok(None) => {
                attempts.push(NbarAttempt {
                    nbar,
                    omega: Some(omega),
                    berge: Some(berge),
                    result: AttemptResult::Infeasible {
                        reason: "no proper coloring at this budget".into(),
                    },
                });
            }
            Ok(Some(coloring)) => {
                let mut f = BTreeMap::new();
                for (j, &nj) in rates.iter().enumerate() {
                    for k in 0..nj {
                        f.insert(PathId::new(j, k), coloring.color_of[cg.vertex(j, k)]);
                    }
                }
                let a = StreamAssignment::new(nbar, f);
                let violations =
                    verify_assignment(g, &d, &r, &a).expect("shapes are consistent");
                // A proper coloring maps to a valid assignment: group cliques
                // give distinct streams, and a contaminant's color collides
                // inside the target group, which has all nbar colors.
                assert!(
                    violations.is_empty(),
                    "coloring produced an invalid assignment: {violations:?}"
                );
                attempts.push(NbarAttempt {
                    nbar,
                    omega: Some(omega),
                    berge: Some(berge),
                    result: AttemptResult::Solution,
                });
                outcome = Outcome::Solution;
                nbar_used = Some(nbar);
                assignment = Some(a);
                break;
            }
        }
    }
    SolveReport { outcome, n, rates, nbar_used, assignment, m: r.m.clone(), attempts }
}
