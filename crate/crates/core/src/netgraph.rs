//! DAG network model: file format, validation, topological order, DOT export.
//!
//! A network is a single-source acyclic digraph with unit-capacity edges and an
//! ordered list of sinks. Parallel edges are legal and addressed by position in
//! the edge list, so a capacity-k link is written as k parallel unit edges.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("network contains a directed cycle")]
    Cycle,
    #[error("sink `{0}` is not reachable from the source")]
    UnreachableSink(String),
    #[error("line {line}: source already declared")]
    DuplicateSource { line: usize },
    #[error("no `source` line found")]
    MissingSource,
    #[error("no `sink` lines found")]
    NoSinks,
    #[error("sink `{0}` declared more than once")]
    DuplicateSink(String),
    #[error("sink `{0}` is the source")]
    SinkIsSource(String),
    #[error("source `{0}` has incoming edges")]
    SourceHasInEdges(String),
    #[error("invalid identifier `{0}`")]
    BadId(String),
}

/// One directed unit-capacity edge. Links are identified by position in
/// [`NetworkInstance::edges`]; two structurally equal entries are distinct links.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: String,
    pub head: String,
}

impl Edge {
    pub fn new(tail: &str, head: &str) -> Self {
        Edge { tail: tail.to_string(), head: head.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkInstance {
    pub nodes: BTreeSet<String>,
    pub edges: Vec<Edge>,
    pub source: String,
    pub sinks: Vec<String>,
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl NetworkInstance {
    /// Builds and validates an instance; `nodes` is derived from the endpoints.
    pub fn new(source: &str, sinks: &[&str], edges: &[(&str, &str)]) -> Result<Self, NetError> {
        let mut nodes: BTreeSet<String> = BTreeSet::new();
        nodes.insert(source.to_string());
        for s in sinks {
            nodes.insert((*s).to_string());
        }
        let edges: Vec<Edge> = edges.iter().map(|(t, h)| Edge::new(t, h)).collect();
        for e in &edges {
            nodes.insert(e.tail.clone());
            nodes.insert(e.head.clone());
        }
        let g = NetworkInstance {
            nodes,
            edges,
            source: source.to_string(),
            sinks: sinks.iter().map(|s| (*s).to_string()).collect(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), NetError> {
        for id in self.nodes.iter() {
            if !valid_id(id) {
                return Err(NetError::BadId(id.clone()));
            }
        }
        if self.sinks.is_empty() {
            return Err(NetError::NoSinks);
        }
        let mut seen = BTreeSet::new();
        for s in &self.sinks {
            if s == &self.source {
                return Err(NetError::SinkIsSource(s.clone()));
            }
            if !seen.insert(s) {
                return Err(NetError::DuplicateSink(s.clone()));
            }
        }
        if self.edges.iter().any(|e| e.head == self.source) {
            return Err(NetError::SourceHasInEdges(self.source.clone()));
        }
        // Kahn count check: acyclic iff every node gets a rank.
        let order = kahn_ranks(self);
        if order.len() != self.nodes.len() {
            return Err(NetError::Cycle);
        }
        let reach = self.reachable_from_source();
        for s in &self.sinks {
            if !reach.contains(s.as_str()) {
                return Err(NetError::UnreachableSink(s.clone()));
            }
        }
        Ok(())
    }

    pub fn sink_count(&self) -> usize {
        self.sinks.len()
    }

    pub fn sink_index(&self, id: &str) -> Option<usize> {
        self.sinks.iter().position(|s| s == id)
    }

    /// Edge indices leaving each node, ascending by position.
    pub fn out_edges(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut m: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for n in &self.nodes {
            m.insert(n.as_str(), Vec::new());
        }
        for (i, e) in self.edges.iter().enumerate() {
            m.get_mut(e.tail.as_str()).expect("tail declared").push(i);
        }
        m
    }

    /// Edge indices entering each node, ascending by position.
    pub fn in_edges(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut m: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for n in &self.nodes {
            m.insert(n.as_str(), Vec::new());
        }
        for (i, e) in self.edges.iter().enumerate() {
            m.get_mut(e.head.as_str()).expect("head declared").push(i);
        }
        m
    }

    fn reachable_from_source(&self) -> BTreeSet<&str> {
        let out = self.out_edges();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut q: VecDeque<&str> = VecDeque::new();
        seen.insert(self.source.as_str());
        q.push_back(self.source.as_str());
        while let Some(v) = q.pop_front() {
            for &i in &out[v] {
                let h = self.edges[i].head.as_str();
                if seen.insert(h) {
                    q.push_back(h);
                }
            }
        }
        seen
    }
}

/// Topological ranks over nodes; induces the tail-based partial order on edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrder {
    pub node_rank: BTreeMap<String, usize>,
}

impl EdgeOrder {
    pub fn rank(&self, node: &str) -> usize {
        *self.node_rank.get(node).expect("node has a rank")
    }

    /// Edge order: `a` precedes `b` iff rank(tail a) <= rank(tail b).
    pub fn edge_le(&self, g: &NetworkInstance, a: usize, b: usize) -> bool {
        self.rank(&g.edges[a].tail) <= self.rank(&g.edges[b].tail)
    }

    /// All edge indices sorted by (tail rank, position). Every edge's inputs at
    /// its tail node appear strictly earlier, so one pass suffices to propagate
    /// per-edge values forward.
    pub fn sorted_edges(&self, g: &NetworkInstance) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..g.edges.len()).collect();
        idx.sort_by_key(|&i| (self.rank(&g.edges[i].tail), i));
        idx
    }
}

fn kahn_ranks(g: &NetworkInstance) -> BTreeMap<String, usize> {
    let mut indeg: BTreeMap<&str, usize> = g.nodes.iter().map(|n| (n.as_str(), 0)).collect();
    for e in &g.edges {
        *indeg.get_mut(e.head.as_str()).expect("head declared") += 1;
    }
    let out = g.out_edges();
    // Ties broken lexicographically so ranks are reproducible.
    let mut ready: BTreeSet<&str> =
        indeg.iter().filter(|(_, &d)| d == 0).map(|(&n, _)| n).collect();
    let mut rank = BTreeMap::new();
    let mut next = 0usize;
    while let Some(&v) = ready.iter().next() {
        ready.remove(v);
        rank.insert(v.to_string(), next);
        next += 1;
        for &i in &out[v] {
            let h = g.edges[i].head.as_str();
            let d = indeg.get_mut(h).expect("head declared");
            *d -= 1;
            if *d == 0 {
                ready.insert(h);
            }
        }
    }
    rank
}

/// Deterministic topological completion of the node order.
pub fn topological_order(g: &NetworkInstance) -> EdgeOrder {
    let node_rank = kahn_ranks(g);
    assert_eq!(node_rank.len(), g.nodes.len(), "instance validated as acyclic");
    EdgeOrder { node_rank }
}

/// Parses the line-oriented network format:
/// `# comment`, `source <id>`, `sink <id>` (order defines the sink index),
/// `edge <tail> <head>`. Ids match `[A-Za-z0-9_]+`.
pub fn parse_network(text: &str) -> Result<NetworkInstance, NetError> {
    let mut source: Option<String> = None;
    let mut sinks: Vec<String> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    for (lno, raw) in text.lines().enumerate() {
        let line = lno + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let id_ok = |t: &str| -> Result<String, NetError> {
            if valid_id(t) {
                Ok(t.to_string())
            } else {
                Err(NetError::Syntax { line, msg: format!("invalid identifier `{t}`") })
            }
        };
        match toks[0] {
            "source" => {
                if toks.len() != 2 {
                    return Err(NetError::Syntax { line, msg: "expected `source <id>`".into() });
                }
                if source.is_some() {
                    return Err(NetError::DuplicateSource { line });
                }
                source = Some(id_ok(toks[1])?);
            }
            "sink" => {
                if toks.len() != 2 {
                    return Err(NetError::Syntax { line, msg: "expected `sink <id>`".into() });
                }
                let id = id_ok(toks[1])?;
                if sinks.contains(&id) {
                    return Err(NetError::DuplicateSink(id));
                }
                sinks.push(id);
            }
            "edge" => {
                if toks.len() != 3 {
                    return Err(NetError::Syntax {
                        line,
                        msg: "expected `edge <tail> <head>`".into(),
                    });
                }
                edges.push(Edge { tail: id_ok(toks[1])?, head: id_ok(toks[2])? });
            }
            other => {
                return Err(NetError::Syntax { line, msg: format!("unknown directive `{other}`") });
            }
        }
    }
    let source = source.ok_or(NetError::MissingSource)?;
    if sinks.is_empty() {
        return Err(NetError::NoSinks);
    }
    let mut nodes: BTreeSet<String> = BTreeSet::new();
    nodes.insert(source.clone());
    nodes.extend(sinks.iter().cloned());
    for e in &edges {
        nodes.insert(e.tail.clone());
        nodes.insert(e.head.clone());
    }
    let g = NetworkInstance { nodes, edges, source, sinks };
    g.validate()?;
    Ok(g)
}

/// Inverse of [`parse_network`] up to comments and whitespace.
pub fn serialize_network(g: &NetworkInstance) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "source {}", g.source);
    for t in &g.sinks {
        let _ = writeln!(s, "sink {t}");
    }
    for e in &g.edges {
        let _ = writeln!(s, "edge {} {}", e.tail, e.head);
    }
    s
}

/// DOT export; the source is drawn as a diamond and sinks as double circles.
pub fn to_dot(g: &NetworkInstance) -> String {
    let mut s = String::from("digraph network {\n  rankdir=LR;\n");
    for n in &g.nodes {
        let shape = if n == &g.source {
            "diamond"
        } else if g.sinks.iter().any(|t| t == n) {
            "doublecircle"
        } else {
            "ellipse"
        };
        let _ = writeln!(s, "  \"{n}\" [shape={shape}];");
    }
    for e in &g.edges {
        let _ = writeln!(s, "  \"{}\" -> \"{}\";", e.tail, e.head);
    }
    s.push_str("}\n");
    s
}
