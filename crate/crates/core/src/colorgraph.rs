//! The coloring-graph transformation.
//!
//! Deciding whether a stream assignment over `n̄` streams exists reduces to
//! proper `n̄`-coloring of an undirected graph built from the contamination
//! report. For each sink `j` with rate `n_j` the graph gets a group of `n̄`
//! mutually adjacent vertices: `n_j` *regular* vertices `v{j}.{k}` standing for
//! the sink's paths, padded with `n̄ - n_j` *fictitious* vertices `w{j}.{k}`.
//! A regular vertex is wired to **all** fictitious vertices of a foreign group
//! `j2` exactly when its path is contaminated by sink `j2`. A proper coloring
//! then forces every contaminating stream to collide with one of the target
//! sink's own colors — which is the decodability condition — while the group
//! cliques force pairwise-distinct streams per sink.
//!
//! Cliques in such a graph span at most two groups, which yields a closed-form
//! clique number ([`max_clique_size`]); if it exceeds `n̄`, no assignment with
//! `n̄` streams exists, whatever the coloring search would say.

use crate::contamination::ContaminationReport;
use crate::flows::PathDecomposition;
use crate::ugraph::SimpleGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    Regular,
    Fictitious,
}

#[derive(Debug, Clone)]
pub struct ColoringGraph {
    pub graph: SimpleGraph,
    pub kinds: Vec<VertexKind>,
    /// Sink index of each vertex.
    pub group: Vec<usize>,
    /// Slot within the group: regulars `0..n_j`, fictitious `n_j..nbar`.
    pub slot: Vec<usize>,
    pub nbar: usize,
    pub rates: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColorGraphError {
    #[error("stream budget {nbar} is below the largest sink rate {n}")]
    Budget { nbar: usize, n: usize },
    #[error("malformed coloring graph: {0}")]
    Structure(String),
}

impl ColoringGraph {
    /// Vertex index of slot `k` in group `j`.
    pub fn vertex(&self, j: usize, k: usize) -> usize {
        j * self.nbar + k
    }

    pub fn is_regular(&self, v: usize) -> bool {
        self.kinds[v] == VertexKind::Regular
    }
}

pub fn build_coloring_graph(
    d: &PathDecomposition,
    r: &ContaminationReport,
    nbar: usize,
) -> Result<ColoringGraph, ColorGraphError> {
    let n = d.n();
    if nbar < n {
        return Err(ColorGraphError::Budget { nbar, n });
    }
    let rates = d.rates();
    let s = rates.len();
    let mut names = Vec::with_capacity(s * nbar);
    let mut kinds = Vec::with_capacity(s * nbar);
    let mut group = Vec::with_capacity(s * nbar);
    let mut slot = Vec::with_capacity(s * nbar);
    for (j, &nj) in rates.iter().enumerate() {
        for k in 0..nbar {
            if k < nj {
                names.push(format!("v{}.{}", j + 1, k + 1));
                kinds.push(VertexKind::Regular);
            } else {
                names.push(format!("w{}.{}", j + 1, k - nj + 1));
                kinds.push(VertexKind::Fictitious);
            }
            group.push(j);
            slot.push(k);
        }
    }
    let mut graph = SimpleGraph::new(names);
    for j in 0..s {
        for a in 0..nbar {
            for b in a + 1..nbar {
                graph.add_edge(j * nbar + a, j * nbar + b);
            }
        }
    }
    for (&p, dset) in &r.sets {
        let reached_sinks: std::collections::BTreeSet<usize> =
            dset.iter().map(|q| q.sink).collect();
        for j2 in reached_sinks {
            debug_assert_ne!(j2, p.sink);
            for k in rates[j2]..nbar {
                graph.add_edge(p.sink * nbar + p.slot, j2 * nbar + k);
            }
        }
    }
    Ok(ColoringGraph { graph, kinds, group, slot, nbar, rates })
}

/// Exact clique number, from the two-group structure. Verifies the structural
/// invariants it relies on and panics (via `Structure`) if the graph was not
/// produced by [`build_coloring_graph`].
pub fn max_clique_size(cg: &ColoringGraph) -> Result<usize, ColorGraphError> {
    let g = &cg.graph;
    let s = cg.rates.len();
    let nbar = cg.nbar;
    if g.vertex_count() != s * nbar {
        return Err(ColorGraphError::Structure(format!(
            "{} vertices, expected {}",
            g.vertex_count(),
            s * nbar
        )));
    }
    // Groups are cliques.
    for j in 0..s {
        for a in 0..nbar {
            for b in a + 1..nbar {
                if !g.adjacent(j * nbar + a, j * nbar + b) {
                    return Err(ColorGraphError::Structure(format!(
                        "group {j} is not a clique"
                    )));
                }
            }
        }
    }
    // Cross edges join a regular to a fictitious vertex, and a regular sees
    // all or none of a foreign group's fictitious block.
    for u in 0..g.vertex_count() {
        for &v in g.neighbors(u) {
            if cg.group[u] == cg.group[v] {
                continue;
            }
            let kinds = (cg.kinds[u], cg.kinds[v]);
            if kinds != (VertexKind::Regular, VertexKind::Fictitious)
                && kinds != (VertexKind::Fictitious, VertexKind::Regular)
            {
                return Err(ColorGraphError::Structure(format!(
                    "cross edge {}–{} does not join regular to fictitious",
                    g.name(u),
                    g.name(v)
                )));
            }
        }
    }
    let ficts = |j: usize| cg.rates[j]..nbar;
    // m[j][j2] = regulars of j wired into j2's fictitious block.
    let mut m = vec![vec![0usize; s]; s];
    for j in 0..s {
        for k in 0..cg.rates[j] {
            let v = j * nbar + k;
            for j2 in 0..s {
                if j2 == j {
                    continue;
                }
                let hit = ficts(j2).filter(|&k2| g.adjacent(v, j2 * nbar + k2)).count();
                if hit != 0 && hit != ficts(j2).len() {
                    return Err(ColorGraphError::Structure(format!(
                        "{} sees only part of group {}'s fictitious block",
                        g.name(v),
                        j2 + 1
                    )));
                }
                if hit != 0 {
                    m[j][j2] += 1;
                }
            }
        }
    }
    // Largest clique: one full group (nbar), or the regulars of j wired into
    // j2 plus all of j2's fictitious block.
    let mut best = nbar;
    for j in 0..s {
        for j2 in 0..s {
            if j != j2 && m[j][j2] > 0 {
                best = best.max(m[j][j2] + (nbar - cg.rates[j2]));
            }
        }
    }
    Ok(best)
}

/// Reference clique oracle: exhaustive branch and bound, for cross-checking
/// [`max_clique_size`] on small graphs. Returns one maximum clique, ascending.
pub fn brute_force_max_clique(g: &SimpleGraph) -> Vec<usize> {
    fn grow(
        g: &SimpleGraph,
        current: &mut Vec<usize>,
        candidates: &[usize],
        best: &mut Vec<usize>,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        if current.len() + candidates.len() <= best.len() {
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let rest: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&u| g.adjacent(u, v))
                .collect();
            current.push(v);
            grow(g, current, &rest, best);
            current.pop();
        }
    }
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let mut best = Vec::new();
    grow(g, &mut Vec::new(), &all, &mut best);
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    Hole,
    Antihole,
}

/// An induced odd cycle (length ≥ 5) in the graph or its complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub kind: WitnessKind,
    pub vertices: Vec<usize>,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HoleSearch {
    Found(CycleWitness),
    NoneFound,
    /// The work budget ran out before the search space was exhausted.
    TimedOut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BergeVerdict {
    Berge,
    NotBerge(CycleWitness),
    Unknown,
}

pub const DEFAULT_HOLE_WORK: u64 = 5_000_000;

struct HoleDfs<'a> {
    h: &'a SimpleGraph,
    len: usize,
    work: u64,
    path: Vec<usize>,
}

enum DfsOutcome {
    Found,
    Exhausted,
    OutOfWork,
}

impl HoleDfs<'_> {
    /// Grow an induced path whose minimum vertex is `path[0]`; the final
    /// vertex additionally closes the cycle. Candidates ascend, so the first
    /// hit is the lexicographically least witness for this (start, length).
    fn extend(&mut self) -> DfsOutcome {
        if self.work == 0 {
            return DfsOutcome::OutOfWork;
        }
        self.work -= 1;
        let depth = self.path.len();
        let p0 = self.path[0];
        let last = *self.path.last().unwrap();
        let closing = depth == self.len - 1;
        for &w in self.h.neighbors(last) {
            if w <= p0 || self.path.contains(&w) {
                continue;
            }
            if closing {
                // Cycle direction symmetry: the neighbor of p0 we end on must
                // exceed the one we started toward.
                if w <= self.path[1] || !self.h.adjacent(w, p0) {
                    continue;
                }
                if self.path[1..depth - 1].iter().any(|&x| self.h.adjacent(w, x)) {
                    continue;
                }
                self.path.push(w);
                return DfsOutcome::Found;
            }
            // Interior vertices must not chord back.
            if self.path[..depth - 1].iter().any(|&x| self.h.adjacent(w, x)) {
                continue;
            }
            self.path.push(w);
            match self.extend() {
                DfsOutcome::Found => return DfsOutcome::Found,
                DfsOutcome::OutOfWork => return DfsOutcome::OutOfWork,
                DfsOutcome::Exhausted => {
                    self.path.pop();
                }
            }
        }
        DfsOutcome::Exhausted
    }
}

fn find_odd_hole(h: &SimpleGraph, len: usize, work: &mut u64) -> Result<Option<Vec<usize>>, ()> {
    for p0 in 0..h.vertex_count() {
        let mut dfs = HoleDfs { h, len, work: *work, path: vec![p0] };
        let out = dfs.extend();
        *work = dfs.work;
        match out {
            DfsOutcome::Found => return Ok(Some(dfs.path)),
            DfsOutcome::OutOfWork => return Err(()),
            DfsOutcome::Exhausted => {}
        }
    }
    Ok(None)
}

/// Searches for an induced odd cycle of length 5..=`max_len` in `g`, then for
/// one in the complement. Deterministic: lengths ascend, start vertices
/// ascend, and the DFS expands neighbors in index order, so the returned
/// witness is a pure function of the graph.
pub fn find_odd_hole_or_antihole(g: &SimpleGraph, max_len: usize, work_cap: u64) -> HoleSearch {
    let mut work = work_cap;
    let name_of = |vs: &[usize]| vs.iter().map(|&v| g.name(v).to_string()).collect();
    let mut len = 5;
    while len <= max_len.min(g.vertex_count()) {
        match find_odd_hole(g, len, &mut work) {
            Ok(Some(vs)) => {
                return HoleSearch::Found(CycleWitness {
                    kind: WitnessKind::Hole,
                    names: name_of(&vs),
                    vertices: vs,
                });
            }
            Ok(None) => {}
            Err(()) => return HoleSearch::TimedOut,
        }
        len += 2;
    }
    let comp = g.complement();
    // A 5-antihole is a 5-hole (the complement of C5 is C5), so the hole pass
    // above already covered length 5.
    let mut len = 7;
    while len <= max_len.min(g.vertex_count()) {
        match find_odd_hole(&comp, len, &mut work) {
            Ok(Some(vs)) => {
                return HoleSearch::Found(CycleWitness {
                    kind: WitnessKind::Antihole,
                    names: name_of(&vs),
                    vertices: vs,
                });
            }
            Ok(None) => {}
            Err(()) => return HoleSearch::TimedOut,
        }
        len += 2;
    }
    HoleSearch::NoneFound
}

/// A graph is Berge when neither it nor its complement has an induced odd
/// cycle of length ≥ 5. Exhaustive, so only for small graphs; `Unknown` means
/// the work budget ran out first.
pub fn is_berge(g: &SimpleGraph, work_cap: u64) -> BergeVerdict {
    match find_odd_hole_or_antihole(g, g.vertex_count(), work_cap) {
        HoleSearch::Found(w) => BergeVerdict::NotBerge(w),
        HoleSearch::NoneFound => BergeVerdict::Berge,
        HoleSearch::TimedOut => BergeVerdict::Unknown,
    }
}

/// Graphviz rendering: one cluster per sink, fictitious vertices dashed.
pub fn coloring_graph_dot(cg: &ColoringGraph) -> String {
    let g = &cg.graph;
    let mut out = String::from("graph coloring {\n");
    for j in 0..cg.rates.len() {
        out.push_str(&format!("  subgraph cluster_{j} {{\n    label=\"sink {}\";\n", j + 1));
        for k in 0..cg.nbar {
            let v = cg.vertex(j, k);
            let style = match cg.kinds[v] {
                VertexKind::Regular => "solid",
                VertexKind::Fictitious => "dashed",
            };
            out.push_str(&format!("    \"{}\" [style={style}];\n", g.name(v)));
        }
        out.push_str("  }\n");
    }
    for u in 0..g.vertex_count() {
        for &v in g.neighbors(u) {
            if v > u {
                out.push_str(&format!("  \"{}\" -- \"{}\";\n", g.name(u), g.name(v)));
            }
        }
    }
    out.push_str("}\n");
    out
}
