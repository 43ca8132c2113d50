//! Per-sink maximum sets of edge-disjoint source-to-sink paths.
//!
//! Max-flow runs independently per sink with unit capacities. The augmenting
//! search and the flow-to-path extraction both scan edges by file position, so
//! the decomposition is a deterministic function of the input. A path override
//! file can replace the computed decomposition; overrides are validated for
//! per-sink edge-disjointness and max-flow saturation.

use crate::netgraph::NetworkInstance;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlowError {
    #[error("sink index {given} out of range ({count} sinks)")]
    SinkIndex { given: usize, count: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: no unused edge {tail}->{head} left for this sink")]
    MissingEdge { line: usize, tail: String, head: String },
    #[error("sink `{sink}`: paths share edge #{edge}")]
    SharedEdge { sink: String, edge: usize },
    #[error("sink `{sink}`: {got} paths declared but the max-flow is {want}")]
    NotSaturating { sink: String, got: usize, want: usize },
    #[error("no paths declared for sink `{0}`")]
    MissingSinkPaths(String),
    #[error("sink `{sink}` path {slot}: {msg}")]
    BadPath { sink: String, slot: usize, msg: String },
}

/// Identifies one path: 0-based (sink, slot) internally, rendered 1-based as `j.k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PathId {
    pub sink: usize,
    pub slot: usize,
}

impl fmt::Display for PathId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.sink + 1, self.slot + 1)
    }
}

impl PathId {
    pub fn new(sink: usize, slot: usize) -> Self {
        PathId { sink, slot }
    }

    /// Parses the 1-based `j.k` rendering.
    pub fn parse(s: &str) -> Option<PathId> {
        let (j, k) = s.split_once('.')?;
        let j: usize = j.parse().ok()?;
        let k: usize = k.parse().ok()?;
        if j == 0 || k == 0 {
            return None;
        }
        Some(PathId { sink: j - 1, slot: k - 1 })
    }
}

/// Per-sink edge-disjoint path sets; paths are edge-index sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDecomposition {
    pub per_sink: Vec<Vec<Vec<usize>>>,
}

impl PathDecomposition {
    pub fn n_j(&self, j: usize) -> usize {
        self.per_sink[j].len()
    }

    /// The stream count floor: the largest per-sink rate.
    pub fn n(&self) -> usize {
        self.per_sink.iter().map(|p| p.len()).max().unwrap_or(0)
    }

    pub fn rates(&self) -> Vec<usize> {
        self.per_sink.iter().map(|p| p.len()).collect()
    }

    pub fn total_paths(&self) -> usize {
        self.per_sink.iter().map(|p| p.len()).sum()
    }

    pub fn path(&self, id: PathId) -> &[usize] {
        &self.per_sink[id.sink][id.slot]
    }

    /// All path ids in (sink, slot) order.
    pub fn ids(&self) -> Vec<PathId> {
        let mut v = Vec::with_capacity(self.total_paths());
        for (j, paths) in self.per_sink.iter().enumerate() {
            for k in 0..paths.len() {
                v.push(PathId::new(j, k));
            }
        }
        v
    }
}

/// Unit max-flow toward one sink. Residual arcs at each node are scanned in
/// ascending edge-position order (forward over unsaturated edges, backward over
/// saturated ones), which pins down the flow deterministically.
fn unit_maxflow(g: &NetworkInstance, sink: &str) -> (usize, Vec<bool>) {
    #[derive(Clone, Copy)]
    enum Arc {
        Fwd(usize),
        Bwd(usize),
    }
    let mut incidence: BTreeMap<&str, Vec<Arc>> = BTreeMap::new();
    for n in &g.nodes {
        incidence.insert(n.as_str(), Vec::new());
    }
    // Merge out- and in-arcs ascending by edge index: a single pass over edges
    // pushes each index to both endpoint lists in order, then a stable sort by
    // index keeps ties (none possible) intact.
    let mut tagged: Vec<(usize, bool)> = Vec::with_capacity(g.edges.len() * 2);
    for i in 0..g.edges.len() {
        tagged.push((i, true));
        tagged.push((i, false));
    }
    tagged.sort_by_key(|&(i, fwd)| (i, !fwd));
    for (i, fwd) in tagged {
        let e = &g.edges[i];
        if fwd {
            incidence.get_mut(e.tail.as_str()).unwrap().push(Arc::Fwd(i));
        } else {
            incidence.get_mut(e.head.as_str()).unwrap().push(Arc::Bwd(i));
        }
    }

    fn dfs<'a>(
        g: &'a NetworkInstance,
        incidence: &BTreeMap<&str, Vec<Arc>>,
        used: &mut Vec<bool>,
        visited: &mut BTreeSet<&'a str>,
        v: &'a str,
        sink: &str,
    ) -> bool {
        if v == sink {
            return true;
        }
        visited.insert(v);
        for &arc in &incidence[v] {
            let (passable, next, idx, set_to) = match arc {
                Arc::Fwd(i) => (!used[i], g.edges[i].head.as_str(), i, true),
                Arc::Bwd(i) => (used[i], g.edges[i].tail.as_str(), i, false),
            };
            if passable && !visited.contains(next) && dfs(g, incidence, used, visited, next, sink)
            {
                used[idx] = set_to;
                return true;
            }
        }
        false
    }

    let mut used = vec![false; g.edges.len()];
    let mut value = 0usize;
    loop {
        let mut visited: BTreeSet<&str> = BTreeSet::new();
        if !dfs(g, &incidence, &mut used, &mut visited, g.source.as_str(), sink) {
            break;
        }
        value += 1;
    }
    (value, used)
}

/// Walks the saturated flow forward from the source, lowest edge index first,
/// peeling off one path per unit of flow.
fn extract_paths(g: &NetworkInstance, sink: &str, value: usize, used: &[bool]) -> Vec<Vec<usize>> {
    let out = g.out_edges();
    let mut remaining = used.to_vec();
    let mut paths = Vec::with_capacity(value);
    for _ in 0..value {
        let mut v = g.source.as_str();
        let mut path = Vec::new();
        while v != sink {
            let e = out[v]
                .iter()
                .copied()
                .find(|&i| remaining[i])
                .expect("flow conservation: saturated out-edge exists");
            remaining[e] = false;
            path.push(e);
            v = g.edges[e].head.as_str();
        }
        paths.push(path);
    }
    debug_assert!(remaining.iter().all(|&r| !r), "all flow consumed");
    paths
}

/// The canonical decomposition: for every sink, a maximum edge-disjoint path set.
pub fn decompose(g: &NetworkInstance) -> PathDecomposition {
    let per_sink = g
        .sinks
        .iter()
        .map(|t| {
            let (value, used) = unit_maxflow(g, t);
            extract_paths(g, t, value, &used)
        })
        .collect();
    PathDecomposition { per_sink }
}

/// Max-flow value from the source to sink `j` (0-based index).
pub fn maxflow_value(g: &NetworkInstance, j: usize) -> Result<usize, FlowError> {
    if j >= g.sinks.len() {
        return Err(FlowError::SinkIndex { given: j, count: g.sinks.len() });
    }
    Ok(unit_maxflow(g, &g.sinks[j]).0)
}

/// Parses `path <sink-id> <node> <node> ...` lines. Consecutive node pairs are
/// resolved to edges by lowest position not already used by the same sink, so
/// parallel links are consumed in file order.
pub fn parse_paths_override(
    g: &NetworkInstance,
    text: &str,
) -> Result<PathDecomposition, FlowError> {
    let mut per_sink: Vec<Vec<Vec<usize>>> = vec![Vec::new(); g.sinks.len()];
    let mut used: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.sinks.len()];
    for (lno, raw) in text.lines().enumerate() {
        let line = lno + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks[0] != "path" {
            return Err(FlowError::Syntax {
                line,
                msg: format!("unknown directive `{}`", toks[0]),
            });
        }
        if toks.len() < 4 {
            return Err(FlowError::Syntax {
                line,
                msg: "expected `path <sink-id> <node> <node> ...`".into(),
            });
        }
        let sink_id = toks[1];
        let j = g.sink_index(sink_id).ok_or_else(|| FlowError::Syntax {
            line,
            msg: format!("unknown sink `{sink_id}`"),
        })?;
        let nodes = &toks[2..];
        if nodes[0] != g.source {
            return Err(FlowError::Syntax {
                line,
                msg: format!("path must start at the source `{}`", g.source),
            });
        }
        if *nodes.last().unwrap() != sink_id {
            return Err(FlowError::Syntax {
                line,
                msg: format!("path must end at its sink `{sink_id}`"),
            });
        }
        let mut path = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            let (tail, head) = (w[0], w[1]);
            let e = g
                .edges
                .iter()
                .enumerate()
                .find(|(i, e)| e.tail == tail && e.head == head && !used[j].contains(i))
                .map(|(i, _)| i)
                .ok_or_else(|| FlowError::MissingEdge {
                    line,
                    tail: tail.to_string(),
                    head: head.to_string(),
                })?;
            used[j].insert(e);
            path.push(e);
        }
        per_sink[j].push(path);
    }
    for (j, sink) in g.sinks.iter().enumerate() {
        if per_sink[j].is_empty() {
            return Err(FlowError::MissingSinkPaths(sink.clone()));
        }
        let want = maxflow_value(g, j)?;
        if per_sink[j].len() != want {
            return Err(FlowError::NotSaturating {
                sink: sink.clone(),
                got: per_sink[j].len(),
                want,
            });
        }
    }
    Ok(PathDecomposition { per_sink })
}

/// Renders a decomposition in the path-override format.
pub fn serialize_paths(g: &NetworkInstance, d: &PathDecomposition) -> String {
    let mut s = String::new();
    for (j, paths) in d.per_sink.iter().enumerate() {
        for path in paths {
            s.push_str("path ");
            s.push_str(&g.sinks[j]);
            s.push(' ');
            s.push_str(&g.edges[path[0]].tail);
            for &e in path {
                s.push(' ');
                s.push_str(&g.edges[e].head);
            }
            s.push('\n');
        }
    }
    s
}

/// Structural validation for decompositions built in code rather than parsed.
pub fn validate_decomposition(
    g: &NetworkInstance,
    d: &PathDecomposition,
) -> Result<(), FlowError> {
    if d.per_sink.len() != g.sinks.len() {
        return Err(FlowError::Syntax {
            line: 0,
            msg: format!(
                "decomposition covers {} sinks, network has {}",
                d.per_sink.len(),
                g.sinks.len()
            ),
        });
    }
    for (j, sink) in g.sinks.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (k, path) in d.per_sink[j].iter().enumerate() {
            let bad = |msg: String| FlowError::BadPath { sink: sink.clone(), slot: k + 1, msg };
            if path.is_empty() {
                return Err(bad("empty path".into()));
            }
            for &e in path {
                if e >= g.edges.len() {
                    return Err(bad(format!("edge index #{e} out of range")));
                }
                if !seen.insert(e) {
                    return Err(FlowError::SharedEdge { sink: sink.clone(), edge: e });
                }
            }
            if g.edges[path[0]].tail != g.source {
                return Err(bad("does not start at the source".into()));
            }
            if &g.edges[*path.last().unwrap()].head != sink {
                return Err(bad("does not end at its sink".into()));
            }
            for w in path.windows(2) {
                if g.edges[w[0]].head != g.edges[w[1]].tail {
                    return Err(bad(format!("edges #{} and #{} are not contiguous", w[0], w[1])));
                }
            }
        }
        let want = maxflow_value(g, j)?;
        if d.per_sink[j].len() != want {
            return Err(FlowError::NotSaturating {
                sink: sink.clone(),
                got: d.per_sink[j].len(),
                want,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::netgraph::parse_network;

    #[test]
    fn butterfly_rates_and_exact_paths() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        assert_eq!(d.rates(), vec![2, 2]);
        assert_eq!(d.n(), 2);
        // Edge order: 0 s->u, 1 s->v, 2 u->w, 3 v->w, 4 u->t1, 5 w->x, 6 x->t1,
        // 7 x->t2, 8 v->t2.
        assert_eq!(d.per_sink[0], vec![vec![0, 4], vec![1, 3, 5, 6]]);
        assert_eq!(d.per_sink[1], vec![vec![0, 2, 5, 7], vec![1, 8]]);
    }

    #[test]
    fn extended_butterfly_rates_and_exact_paths() {
        let g = fixtures::extended_butterfly();
        let d = decompose(&g);
        assert_eq!(d.rates(), vec![2, 3]);
        assert_eq!(d.n(), 3);
        assert_eq!(d.per_sink[0], vec![vec![0, 4], vec![1, 3, 5, 6]]);
        assert_eq!(d.per_sink[1], vec![vec![0, 2, 5, 7], vec![1, 8], vec![9, 10, 11]]);
    }

    #[test]
    fn counterexample_routes_through_both_rendezvous_links() {
        let g = fixtures::counterexample();
        let d = decompose(&g);
        assert_eq!(d.rates(), vec![1, 2]);
        assert_eq!(d.per_sink[0], vec![vec![0, 1, 4, 5]]);
        assert_eq!(d.per_sink[1], vec![vec![0, 1, 2, 3], vec![6, 7, 4, 8, 9]]);
    }

    #[test]
    fn single_edge_network() {
        let g = parse_network("source s\nsink t1\nedge s t1\n").unwrap();
        let d = decompose(&g);
        assert_eq!(d.per_sink[0], vec![vec![0]]);
        assert_eq!(maxflow_value(&g, 0), Ok(1));
    }

    #[test]
    fn parallel_star_counts_every_link() {
        let g =
            parse_network("source s\nsink t1\nedge s t1\nedge s t1\nedge s t1\nedge s t1\n")
                .unwrap();
        assert_eq!(maxflow_value(&g, 0), Ok(4));
        let d = decompose(&g);
        assert_eq!(d.per_sink[0], vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn sink_index_out_of_range() {
        let g = fixtures::butterfly();
        assert_eq!(maxflow_value(&g, 2), Err(FlowError::SinkIndex { given: 2, count: 2 }));
    }

    #[test]
    fn decomposition_is_deterministic() {
        let g = fixtures::non_berge();
        assert_eq!(decompose(&g), decompose(&g));
    }

    #[test]
    fn decomposed_paths_pass_structural_validation() {
        for g in [
            fixtures::butterfly(),
            fixtures::extended_butterfly(),
            fixtures::counterexample(),
            fixtures::non_berge(),
        ] {
            validate_decomposition(&g, &decompose(&g)).unwrap();
        }
    }

    #[test]
    fn override_round_trips_canonical_butterfly() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let text = serialize_paths(&g, &d);
        assert_eq!(parse_paths_override(&g, &text).unwrap(), d);
    }

    #[test]
    fn override_rejects_non_maximum_sets() {
        let g = fixtures::butterfly();
        let err =
            parse_paths_override(&g, "path t1 s u t1\npath t2 s u w x t2\npath t2 s v t2\n")
                .unwrap_err();
        assert_eq!(
            err,
            FlowError::NotSaturating { sink: "t1".into(), got: 1, want: 2 }
        );
    }

    #[test]
    fn override_rejects_unknown_sink_and_bad_endpoints() {
        let g = fixtures::butterfly();
        assert!(matches!(
            parse_paths_override(&g, "path tX s u t1\n").unwrap_err(),
            FlowError::Syntax { line: 1, .. }
        ));
        assert!(matches!(
            parse_paths_override(&g, "path t1 u w t1\n").unwrap_err(),
            FlowError::Syntax { line: 1, .. }
        ));
    }

    #[test]
    fn override_rejects_reusing_an_edge_within_a_sink() {
        let g = parse_network("source s\nsink t\nedge s m\nedge m t\nedge s m\nedge m t\n")
            .unwrap();
        // Both declared paths resolve the same node pairs; parallel resolution
        // assigns distinct positions, so this is accepted with edges 0/1 and 2/3.
        let d = parse_paths_override(&g, "path t s m t\npath t s m t\n").unwrap();
        assert_eq!(d.per_sink[0], vec![vec![0, 1], vec![2, 3]]);
        // A third copy has no unused parallel edge left.
        let err = parse_paths_override(&g, "path t s m t\npath t s m t\npath t s m t\n")
            .unwrap_err();
        assert!(matches!(err, FlowError::MissingEdge { line: 3, .. }));
    }

    #[test]
    fn missing_sink_paths_is_reported() {
        let g = fixtures::butterfly();
        let err = parse_paths_override(&g, "path t1 s u t1\npath t1 s v w x t1\n").unwrap_err();
        assert_eq!(err, FlowError::MissingSinkPaths("t2".into()));
    }

    #[test]
    fn removing_a_path_reduces_maxflow_by_one() {
        let g = fixtures::extended_butterfly();
        let d = decompose(&g);
        for j in 0..g.sink_count() {
            for path in &d.per_sink[j] {
                let keep: Vec<(&str, &str)> = g
                    .edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !path.contains(i))
                    .map(|(_, e)| (e.tail.as_str(), e.head.as_str()))
                    .collect();
                // Single-sink copy: deleting sink j's path may orphan other
                // sinks, and their reachability is irrelevant to this flow.
                let reduced = NetworkInstance::new(&g.source, &[&g.sinks[j]], &keep);
                let flow = match reduced {
                    Ok(r) => maxflow_value(&r, 0).unwrap(),
                    // Removing the last path can disconnect the sink entirely.
                    Err(crate::netgraph::NetError::UnreachableSink(_)) => 0,
                    Err(e) => panic!("unexpected validation failure: {e}"),
                };
                assert_eq!(flow, d.per_sink[j].len() - 1);
            }
        }
    }
}
