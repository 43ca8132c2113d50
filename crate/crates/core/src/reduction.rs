//! Graph coloring ⇄ network feasibility.
//!
//! Any coloring instance (graph + color budget `n`) maps to a network whose
//! stream-assignment problem at `n̄ = n` has a solution exactly when the graph
//! is `n`-colorable — the hardness witness for the decision problem.
//!
//! Gadget: every coloring vertex `v` gets one *rendezvous link* `(v_in,
//! v_out)`. Every path that must cross `v` enters via its own parallel
//! `(s, v_in)` edge and leaves via its own `(v_out, sink)` edge, so distinct
//! crossings share exactly the link. Per coloring edge `{u, w}` a rate-2 sink
//! with one path through `u`'s link and one through `w`'s; per vertex `v` a
//! rate-1 sink through `v`'s link — its single stream forces, by the
//! decodability condition, *all* streams crossing the link to coincide, making
//! "stream on link `v`" a well-defined color; and one final sink with `n`
//! disjoint paths pinning the stream count to `n`. The rate-2 sinks then need
//! their two streams distinct: exactly properness of the pulled-back coloring.

use crate::coloring::{chromatic_number_oracle, ColoringError};
use crate::contamination::contamination_sets;
use crate::fixtures;
use crate::flows::{validate_decomposition, PathDecomposition, PathId};
use crate::netgraph::NetworkInstance;
use crate::solver::{brute_force_assign, solve, NbarPolicy, Outcome, SolveOptions};
use crate::ugraph::SimpleGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid coloring instance: {0}")]
    Validation(String),
    #[error("instance beyond oracle capacity: {0}")]
    Cap(String),
}

/// An undirected graph plus a color budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringInstance {
    pub vertices: Vec<String>,
    /// Index pairs `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub n: usize,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl ColoringInstance {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(usize, usize)>,
        n: usize,
    ) -> Result<Self, ReductionError> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if !valid_id(v) {
                return Err(ReductionError::Validation(format!("bad vertex id `{v}`")));
            }
            if !seen.insert(v) {
                return Err(ReductionError::Validation(format!("duplicate vertex `{v}`")));
            }
        }
        if n == 0 {
            return Err(ReductionError::Validation("color budget must be at least 1".into()));
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(ReductionError::Validation("edge endpoint out of range".into()));
            }
            if a == b {
                return Err(ReductionError::Validation(format!(
                    "self-loop at `{}`",
                    vertices[a]
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(ReductionError::Validation("duplicate edge".into()));
        }
        Ok(ColoringInstance { vertices, edges: normalized, n })
    }

    pub fn to_graph(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.vertices.clone());
        for &(a, b) in &self.edges {
            g.add_edge(a, b);
        }
        g
    }
}

/// Lines: `vertex <id>`, `edge <a> <b>`, `colors <n>`; `#` comments.
pub fn parse_coloring(text: &str) -> Result<ColoringInstance, ReductionError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut colors: Option<usize> = None;
    for (lno, raw) in text.lines().enumerate() {
        let line = lno + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let syntax = |msg: String| ReductionError::Syntax { line, msg };
        match toks[0] {
            "vertex" if toks.len() == 2 => {
                let id = toks[1].to_string();
                if !valid_id(&id) {
                    return Err(syntax(format!("bad vertex id `{id}`")));
                }
                if index.contains_key(&id) {
                    return Err(syntax(format!("duplicate vertex `{id}`")));
                }
                index.insert(id.clone(), vertices.len());
                vertices.push(id);
            }
            "edge" if toks.len() == 3 => {
                let a = *index
                    .get(toks[1])
                    .ok_or_else(|| syntax(format!("unknown vertex `{}`", toks[1])))?;
                let b = *index
                    .get(toks[2])
                    .ok_or_else(|| syntax(format!("unknown vertex `{}`", toks[2])))?;
                if a == b {
                    return Err(syntax(format!("self-loop at `{}`", toks[1])));
                }
                let pair = (a.min(b), a.max(b));
                if edges.contains(&pair) {
                    return Err(syntax(format!("duplicate edge {} {}", toks[1], toks[2])));
                }
                edges.push(pair);
            }
            "colors" if toks.len() == 2 => {
                if colors.is_some() {
                    return Err(syntax("colors declared twice".into()));
                }
                let n: usize = toks[1]
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| syntax(format!("bad color count `{}`", toks[1])))?;
                colors = Some(n);
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }
    let n = colors.ok_or_else(|| ReductionError::Validation("missing `colors` line".into()))?;
    ColoringInstance::new(vertices, edges, n)
}

pub fn serialize_coloring(c: &ColoringInstance) -> String {
    let mut s = String::new();
    for v in &c.vertices {
        s.push_str(&format!("vertex {v}\n"));
    }
    for &(a, b) in &c.edges {
        s.push_str(&format!("edge {} {}\n", c.vertices[a], c.vertices[b]));
    }
    s.push_str(&format!("colors {}\n", c.n));
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionOutput {
    pub network: NetworkInstance,
    /// The decomposition the equivalence argument is about. Solvers must use
    /// it: a re-derived max-flow decomposition may route crossings elsewhere.
    pub paths: PathDecomposition,
    /// Coloring vertex → rendezvous link edge index.
    pub vertex_to_link: BTreeMap<String, usize>,
    /// Coloring edge (by sorted position) → its rate-2 sink.
    pub edge_to_sink: Vec<String>,
    pub vertex_to_sink: BTreeMap<String, String>,
    pub final_sink: String,
}

/// Builds the gadget network. Sinks are ordered: per-edge sinks `te_<i>`
/// (edge list order), per-vertex sinks `tv_<v>` (vertex order), then the
/// rate-`n` sink `t_star`.
pub fn reduce_coloring_to_network(c: &ColoringInstance) -> Result<ReductionOutput, ReductionError> {
    // Users of vertex v's link: the incident edge sinks (ascending), then the
    // vertex's own sink. One parallel entry and one private exit per user.
    #[derive(Clone, Copy, PartialEq, Eq)]
    enum User {
        EdgeSink(usize),
        VertexSink,
    }
    let nv = c.vertices.len();
    let users_of: Vec<Vec<User>> = (0..nv)
        .map(|vi| {
            let mut u: Vec<User> = c
                .edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == vi || b == vi)
                .map(|(i, _)| User::EdgeSink(i))
                .collect();
            u.push(User::VertexSink);
            u
        })
        .collect();

    let edge_to_sink: Vec<String> = (0..c.edges.len()).map(|i| format!("te_{i}")).collect();
    let vertex_to_sink: BTreeMap<String, String> =
        c.vertices.iter().map(|v| (v.clone(), format!("tv_{v}"))).collect();
    let final_sink = "t_star".to_string();

    let sink_name = |vi: usize, u: User| -> String {
        match u {
            User::EdgeSink(i) => edge_to_sink[i].clone(),
            User::VertexSink => vertex_to_sink[&c.vertices[vi]].clone(),
        }
    };

    let mut edges: Vec<(String, String)> = Vec::new();
    let mut vertex_to_link: BTreeMap<String, usize> = BTreeMap::new();
    // entry/exit edge index per (vertex, user-position).
    let mut entry_idx: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut exit_idx: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for vi in 0..nv {
        let v = &c.vertices[vi];
        let v_in = format!("n_{v}_in");
        let v_out = format!("n_{v}_out");
        for _ in &users_of[vi] {
            entry_idx[vi].push(edges.len());
            edges.push(("s".to_string(), v_in.clone()));
        }
        vertex_to_link.insert(v.clone(), edges.len());
        edges.push((v_in.clone(), v_out.clone()));
        for &u in &users_of[vi] {
            exit_idx[vi].push(edges.len());
            edges.push((v_out.clone(), sink_name(vi, u)));
        }
    }
    let star_base = edges.len();
    for _ in 0..c.n {
        edges.push(("s".to_string(), final_sink.clone()));
    }

    let mut sinks: Vec<String> = edge_to_sink.clone();
    sinks.extend(c.vertices.iter().map(|v| vertex_to_sink[v].clone()));
    sinks.push(final_sink.clone());

    let edge_refs: Vec<(&str, &str)> =
        edges.iter().map(|(t, h)| (t.as_str(), h.as_str())).collect();
    let sink_refs: Vec<&str> = sinks.iter().map(|s| s.as_str()).collect();
    let network = NetworkInstance::new("s", &sink_refs, &edge_refs)
        .expect("gadget network is a valid DAG");

    // One crossing of vertex v as a three-edge path, identified by the user's
    // position in v's user list.
    let crossing = |vi: usize, u: User| -> Vec<usize> {
        let pos = users_of[vi].iter().position(|&x| x == u).expect("user registered");
        vec![entry_idx[vi][pos], vertex_to_link[&c.vertices[vi]], exit_idx[vi][pos]]
    };
    let mut per_sink: Vec<Vec<Vec<usize>>> = Vec::with_capacity(sinks.len());
    for (i, &(a, b)) in c.edges.iter().enumerate() {
        // Slot order: lexicographically smaller endpoint id first.
        let (first, second) =
            if c.vertices[a] <= c.vertices[b] { (a, b) } else { (b, a) };
        per_sink.push(vec![
            crossing(first, User::EdgeSink(i)),
            crossing(second, User::EdgeSink(i)),
        ]);
    }
    for vi in 0..nv {
        per_sink.push(vec![crossing(vi, User::VertexSink)]);
    }
    per_sink.push((0..c.n).map(|k| vec![star_base + k]).collect());
    let paths = PathDecomposition { per_sink };
    validate_decomposition(&network, &paths).expect("gadget paths saturate every sink");

    debug_assert_eq!(network.edges.len(), 4 * c.edges.len() + 3 * nv + c.n);
    Ok(ReductionOutput {
        network,
        paths,
        vertex_to_link,
        edge_to_sink,
        vertex_to_sink,
        final_sink,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub chi: usize,
    pub n: usize,
    pub feasible: bool,
    /// `feasible == (chi <= n)` — the equivalence both directions.
    pub consistent: bool,
    /// Which oracles decided the network side.
    pub route: String,
    /// Pulled-back coloring (vertex → 0-based color) when feasible.
    pub coloring: Option<BTreeMap<String, usize>>,
    pub coloring_proper: Option<bool>,
}

/// Decides both sides independently and compares: chromatic number on the
/// coloring side, stream assignment at `n̄ = n` (with the gadget's own paths)
/// on the network side. When the instance fits the brute-force caps, the
/// exhaustive oracle cross-checks the pipeline.
pub fn check_equivalence(
    c: &ColoringInstance,
    out: &ReductionOutput,
) -> Result<EquivalenceReport, ReductionError> {
    let chi = chromatic_number_oracle(&c.to_graph()).map_err(|e| match e {
        ColoringError::Cap { got, cap } => {
            ReductionError::Cap(format!("chromatic number at least {got}, oracle cap {cap}"))
        }
        other => ReductionError::Cap(other.to_string()),
    })?;
    let report = solve(&out.network, Some(&out.paths), SolveOptions {
        nbar: NbarPolicy::Fixed(c.n),
        ..SolveOptions::default()
    });
    assert_ne!(report.outcome, Outcome::Unknown, "no deadline was set");
    let feasible = report.outcome == Outcome::Solution;

    let mut route = "solve".to_string();
    if out.paths.total_paths() <= 10 && c.n <= 4 {
        let r = contamination_sets(&out.network, &out.paths);
        let brute =
            brute_force_assign(&out.paths, &r, c.n).expect("instance within brute caps");
        assert_eq!(
            brute.is_some(),
            feasible,
            "exhaustive oracle disagrees with the pipeline"
        );
        route = "brute+solve".to_string();
    }

    let (coloring, coloring_proper) = match (&report.assignment, feasible) {
        (Some(a), true) => {
            let mut colors: BTreeMap<String, usize> = BTreeMap::new();
            for v in &c.vertices {
                let sink = &out.vertex_to_sink[v];
                let j = out.network.sink_index(sink).expect("vertex sink exists");
                colors.insert(v.clone(), a.f[&PathId::new(j, 0)]);
            }
            // Proper means: edge endpoints differ, and (the forcing argument)
            // every path crossing a link carries that vertex's color.
            let mut proper = c
                .edges
                .iter()
                .all(|&(x, y)| colors[&c.vertices[x]] != colors[&c.vertices[y]]);
            for p in out.paths.ids() {
                for &e in out.paths.path(p) {
                    if let Some((v, _)) =
                        out.vertex_to_link.iter().find(|(_, &link)| link == e)
                    {
                        proper &= a.f[&p] == colors[v];
                    }
                }
            }
            (Some(colors), Some(proper))
        }
        _ => (None, None),
    };
    Ok(EquivalenceReport {
        chi,
        n: c.n,
        feasible,
        consistent: feasible == (chi <= c.n),
        route,
        coloring,
        coloring_proper,
    })
}

// ---------------------------------------------------------------------------
// Corpus generation.

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusKind {
    Cycle { len: usize, colors: usize },
    Complete { k: usize, colors: usize },
    RandomGnp { vertices: usize, prob: f64, count: usize, colors: usize },
    /// The four worked examples as ready-to-solve networks.
    Fixtures,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusPayload {
    Coloring(ColoringInstance),
    Network { network: NetworkInstance, paths_text: Option<String> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub name: String,
    pub payload: CorpusPayload,
}

pub fn generate_corpus(kind: CorpusKind, seed: u64) -> Vec<CorpusItem> {
    match kind {
        CorpusKind::Cycle { len, colors } => {
            assert!(len >= 3, "cycles start at length 3");
            let vertices: Vec<String> = (0..len).map(|i| format!("v{i}")).collect();
            let edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
            let c = ColoringInstance::new(vertices, edges, colors).expect("cycle is valid");
            vec![CorpusItem { name: format!("cycle{len}"), payload: CorpusPayload::Coloring(c) }]
        }
        CorpusKind::Complete { k, colors } => {
            assert!(k >= 1);
            let vertices: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
            let mut edges = Vec::new();
            for a in 0..k {
                for b in a + 1..k {
                    edges.push((a, b));
                }
            }
            let c = ColoringInstance::new(vertices, edges, colors).expect("clique is valid");
            vec![CorpusItem { name: format!("k{k}"), payload: CorpusPayload::Coloring(c) }]
        }
        CorpusKind::RandomGnp { vertices, prob, count, colors } => {
            assert!((0.0..=1.0).contains(&prob), "probability in [0, 1]");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|i| {
                    let names: Vec<String> = (0..vertices).map(|v| format!("v{v}")).collect();
                    let mut edges = Vec::new();
                    for a in 0..vertices {
                        for b in a + 1..vertices {
                            if rng.gen_bool(prob) {
                                edges.push((a, b));
                            }
                        }
                    }
                    let c = ColoringInstance::new(names, edges, colors)
                        .expect("sampled instance is valid");
                    CorpusItem {
                        name: format!("gnp{vertices}_p{}_{i}", (prob * 100.0).round() as u32),
                        payload: CorpusPayload::Coloring(c),
                    }
                })
                .collect()
        }
        CorpusKind::Fixtures => fixtures::all()
            .into_iter()
            .map(|f| CorpusItem {
                name: f.name.to_string(),
                payload: CorpusPayload::Network {
                    network: f.network,
                    paths_text: f.paths_text.map(|t| t.to_string()),
                },
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(len: usize, colors: usize) -> ColoringInstance {
        match generate_corpus(CorpusKind::Cycle { len, colors }, 0).remove(0).payload {
            CorpusPayload::Coloring(c) => c,
            _ => unreachable!(),
        }
    }

    fn complete(k: usize, colors: usize) -> ColoringInstance {
        match generate_corpus(CorpusKind::Complete { k, colors }, 0).remove(0).payload {
            CorpusPayload::Coloring(c) => c,
            _ => unreachable!(),
        }
    }

    #[test]
    fn parse_and_serialize_round_trip() {
        let text = "vertex a\nvertex b\nvertex c\nedge a b\nedge b c\ncolors 2\n";
        let c = parse_coloring(text).unwrap();
        assert_eq!(c.vertices, vec!["a", "b", "c"]);
        assert_eq!(c.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(c.n, 2);
        assert_eq!(serialize_coloring(&c), text);
        assert_eq!(parse_coloring(&serialize_coloring(&c)).unwrap(), c);
    }

    #[test]
    fn parse_rejects_malformed_instances() {
        let cases = [
            ("vertex a\nvertex a\ncolors 1\n", "duplicate vertex"),
            ("vertex a\nedge a a\ncolors 1\n", "self-loop"),
            ("vertex a\nedge a b\ncolors 1\n", "unknown vertex"),
            ("vertex a\nvertex b\nedge a b\nedge b a\ncolors 1\n", "duplicate edge"),
            ("vertex a\ncolors 1\ncolors 2\n", "twice"),
            ("vertex a\nfrob a\ncolors 1\n", "unknown directive"),
            ("vertex a\ncolors 0\n", "bad color count"),
        ];
        for (text, needle) in cases {
            let err = parse_coloring(text).unwrap_err();
            assert!(err.to_string().contains(needle), "{text:?} -> {err}");
        }
        assert_eq!(
            parse_coloring("vertex a\n").unwrap_err(),
            ReductionError::Validation("missing `colors` line".into())
        );
    }

    #[test]
    fn size_formulas_hold_exactly() {
        for (c, sinks, paths) in [
            (cycle(5, 3), 5 + 5 + 1, 2 * 5 + 5 + 3),
            (complete(2, 2), 1 + 2 + 1, 2 + 2 + 2),
            (complete(4, 3), 6 + 4 + 1, 12 + 4 + 3),
        ] {
            let out = reduce_coloring_to_network(&c).unwrap();
            assert_eq!(out.network.sink_count(), sinks);
            assert_eq!(out.paths.total_paths(), paths);
            assert_eq!(
                out.network.edges.len(),
                4 * c.edges.len() + 3 * c.vertices.len() + c.n
            );
        }
    }

    #[test]
    fn gadget_overlaps_are_exactly_the_links() {
        let c = cycle(5, 3);
        let out = reduce_coloring_to_network(&c).unwrap();
        let r = contamination_sets(&out.network, &out.paths);
        // Every directly shared edge is some vertex's rendezvous link.
        let links: std::collections::BTreeSet<usize> =
            out.vertex_to_link.values().copied().collect();
        for ((_, _), shared) in &r.overlap_edges {
            assert_eq!(shared.len(), 1);
            assert!(links.contains(&shared[0]));
        }
        // The final sink is overlap-free.
        let j = out.network.sink_index(&out.final_sink).unwrap();
        for k in 0..out.paths.n_j(j) {
            assert!(r.sets[&PathId::new(j, k)].is_empty());
        }
    }

    #[test]
    fn odd_cycle_equivalence_both_directions() {
        let c3 = cycle(5, 3);
        let out3 = reduce_coloring_to_network(&c3).unwrap();
        let rep3 = check_equivalence(&c3, &out3).unwrap();
        assert_eq!(rep3.chi, 3);
        assert!(rep3.feasible && rep3.consistent);
        assert_eq!(rep3.coloring_proper, Some(true));

        let c2 = cycle(5, 2);
        let out2 = reduce_coloring_to_network(&c2).unwrap();
        let rep2 = check_equivalence(&c2, &out2).unwrap();
        assert!(!rep2.feasible && rep2.consistent);
        assert_eq!(rep2.coloring, None);
    }

    #[test]
    fn small_clique_equivalence_with_brute_cross_check() {
        let c = complete(2, 2);
        let out = reduce_coloring_to_network(&c).unwrap();
        let rep = check_equivalence(&c, &out).unwrap();
        assert_eq!(rep.chi, 2);
        assert!(rep.feasible && rep.consistent);
        assert_eq!(rep.route, "brute+solve");
        let colors = rep.coloring.unwrap();
        assert_ne!(colors["v0"], colors["v1"]);

        let c1 = complete(2, 1);
        let out1 = reduce_coloring_to_network(&c1).unwrap();
        let rep1 = check_equivalence(&c1, &out1).unwrap();
        assert!(!rep1.feasible && rep1.consistent);
        assert_eq!(rep1.route, "brute+solve");
    }

    #[test]
    fn k4_needs_four_colors() {
        let c3 = complete(4, 3);
        let out3 = reduce_coloring_to_network(&c3).unwrap();
        let rep3 = check_equivalence(&c3, &out3).unwrap();
        assert_eq!(rep3.chi, 4);
        assert!(!rep3.feasible && rep3.consistent);

        let c4 = complete(4, 4);
        let out4 = reduce_coloring_to_network(&c4).unwrap();
        let rep4 = check_equivalence(&c4, &out4).unwrap();
        assert!(rep4.feasible && rep4.consistent);
        assert_eq!(rep4.coloring_proper, Some(true));
    }

    #[test]
    fn reduction_is_deterministic() {
        let c = cycle(5, 3);
        assert_eq!(reduce_coloring_to_network(&c), reduce_coloring_to_network(&c));
    }

    #[test]
    fn gnp_corpus_is_seeded() {
        let kind = CorpusKind::RandomGnp { vertices: 8, prob: 0.3, count: 3, colors: 3 };
        let a = generate_corpus(kind.clone(), 7);
        let b = generate_corpus(kind, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert_eq!(a[0].name, "gnp8_p30_0");
    }

    #[test]
    fn fixture_corpus_lists_the_four_networks() {
        let items = generate_corpus(CorpusKind::Fixtures, 0);
        let names: Vec<&str> = items.iter().map(|i| i.name.as_str()).collect();
        assert_eq!(
            names,
            vec!["butterfly", "extended_butterfly", "counterexample", "non_berge"]
        );
        match &items[3].payload {
            CorpusPayload::Network { paths_text, .. } => assert!(paths_text.is_some()),
            _ => panic!("fixtures are networks"),
        }
    }

    #[test]
    fn vertex_names_cannot_collide_with_gadget_names() {
        // Adversarial ids that would clash under naive naming schemes.
        let c = ColoringInstance::new(
            vec!["s".into(), "t_star".into(), "tv_s".into(), "n_s_in".into()],
            vec![(0, 1), (2, 3)],
            2,
        )
        .unwrap();
        let out = reduce_coloring_to_network(&c).unwrap();
        assert_eq!(out.network.sink_count(), 2 + 4 + 1);
        assert_eq!(out.paths.total_paths(), 4 + 4 + 2);
    }
}
