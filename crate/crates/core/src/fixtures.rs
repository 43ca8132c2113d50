//! Worked example networks used across tests, benchmarks, and `gen`.
//!
//! Edge order is part of each fixture: decompositions, contamination sets,
//! and coloring graphs in the test suite are frozen against these exact
//! indices. Do not reorder.

use crate::flows::decompose;
use crate::netgraph::NetworkInstance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rate (2, 2): the classic example where routing alone cannot serve both
/// sinks but one coded crossover edge can.
pub fn butterfly() -> NetworkInstance {
    NetworkInstance::new(
        "s",
        &["t1", "t2"],
        &[
            ("s", "u"),
            ("s", "v"),
            ("u", "w"),
            ("v", "w"),
            ("u", "t1"),
            ("w", "x"),
            ("x", "t1"),
            ("x", "t2"),
            ("v", "t2"),
        ],
    )
    .expect("butterfly is a valid instance")
}

/// Butterfly plus a third disjoint branch into t2, lifting its rate to 3.
pub fn extended_butterfly() -> NetworkInstance {
    NetworkInstance::new(
        "s",
        &["t1", "t2"],
        &[
            ("s", "u"),
            ("s", "v"),
            ("u", "w"),
            ("v", "w"),
            ("u", "t1"),
            ("w", "x"),
            ("x", "t1"),
            ("x", "t2"),
            ("v", "t2"),
            ("s", "y"),
            ("y", "z"),
            ("z", "t2"),
        ],
    )
    .expect("extended butterfly is a valid instance")
}

/// Rate (1, 2) network that is saturable but never decodable: for every
/// stream budget the coloring graph's clique number exceeds the budget.
pub fn counterexample() -> NetworkInstance {
    NetworkInstance::new(
        "s",
        &["t1", "t2"],
        &[
            ("s", "m1"),
            ("m1", "m2"),
            ("m2", "d1"),
            ("d1", "t2"),
            ("m2", "m3"),
            ("m3", "t1"),
            ("s", "c2"),
            ("c2", "m2"),
            ("m3", "d2"),
            ("d2", "t2"),
        ],
    )
    .expect("counterexample is a valid instance")
}

/// Four-sink network whose coloring graph (at n̄ = 3, with [`non_berge_paths`])
/// contains a 5-hole — solvable, but outside the perfect-graph territory.
pub fn non_berge() -> NetworkInstance {
    NetworkInstance::new(
        "s",
        &["t1", "t2", "t3", "t4"],
        &[
            ("s", "x11"),
            ("x11", "c_in"),
            ("c_in", "c_out"),
            ("c_out", "a_in"),
            ("a_in", "a_out"),
            ("a_out", "t1"),
            ("s", "x12"),
            ("x12", "t1"),
            ("s", "x21"),
            ("x21", "a_in"),
            ("a_out", "t2"),
            ("s", "x22"),
            ("x22", "b_in"),
            ("b_in", "b_out"),
            ("b_out", "t2"),
            ("s", "x31"),
            ("x31", "c_in"),
            ("c_out", "b_in"),
            ("b_out", "t3"),
            ("s", "x32"),
            ("x32", "t3"),
            ("s", "x41"),
            ("x41", "t4"),
            ("s", "x42"),
            ("x42", "t4"),
            ("s", "x43"),
            ("x43", "t4"),
        ],
    )
    .expect("non-Berge fixture is a valid instance")
}

/// Routing that threads t1, t2, t3 through the three shared funnels so their
/// pairwise overlaps form an odd cycle of conflicts. The canonical max-flow
/// decomposition routes around it, so this override is load-bearing.
pub fn non_berge_paths() -> &'static str {
    "path t1 s x11 c_in c_out a_in a_out t1\n\
     path t1 s x12 t1\n\
     path t2 s x21 a_in a_out t2\n\
     path t2 s x22 b_in b_out t2\n\
     path t3 s x31 c_in c_out b_in b_out t3\n\
     path t3 s x32 t3\n\
     path t4 s x41 t4\n\
     path t4 s x42 t4\n\
     path t4 s x43 t4\n"
}

/// Three rate-1 sinks chained by overlaps A–B and B–C (no A–C edge): the
/// contamination closure still pulls C into A's set through B's path.
pub fn three_chain() -> NetworkInstance {
    NetworkInstance::new(
        "s",
        &["ta", "tb", "tc"],
        &[
            ("s", "g1"),
            ("g1", "g2"),
            ("g2", "ta"),
            ("s", "b0"),
            ("b0", "g1"),
            ("g2", "g3"),
            ("g3", "g4"),
            ("g4", "tb"),
            ("s", "c0"),
            ("c0", "g3"),
            ("g4", "tc"),
        ],
    )
    .expect("chain fixture is a valid instance")
}

/// Override forcing tb's single path through both shared segments.
pub fn three_chain_paths() -> &'static str {
    "path ta s g1 g2 ta\n\
     path tb s b0 g1 g2 g3 g4 tb\n\
     path tc s c0 g3 g4 tc\n"
}

pub struct Fixture {
    pub name: &'static str,
    pub network: NetworkInstance,
    /// Present when the interesting behaviour needs a specific routing.
    pub paths_text: Option<&'static str>,
}

/// The four worked examples in presentation order.
pub fn all() -> Vec<Fixture> {
    vec![
        Fixture { name: "butterfly", network: butterfly(), paths_text: None },
        Fixture { name: "extended_butterfly", network: extended_butterfly(), paths_text: None },
        Fixture { name: "counterexample", network: counterexample(), paths_text: None },
        Fixture { name: "non_berge", network: non_berge(), paths_text: Some(non_berge_paths()) },
    ]
}

/// Seeded stream of small random DAG instances for oracle cross-checks.
///
/// Every instance fits the brute-force caps: at most `max_total_paths` paths
/// in total (and at least 3), per-sink rates at most `max_n`, 2–3 sinks.
pub fn random_instances(
    count: usize,
    seed: u64,
    max_total_paths: usize,
    max_n: usize,
) -> Vec<NetworkInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut guard = 0usize;
    while out.len() < count {
        guard += 1;
        assert!(guard < 200_000, "rejection sampling failed to converge");
        let internal = rng.gen_range(4..=9);
        // Node 0 is the source; every later node gets an incoming edge from
        // an earlier one, so the graph is an acyclic single-source funnel.
        let names: Vec<String> =
            std::iter::once("s".to_string()).chain((1..=internal).map(|i| format!("x{i}"))).collect();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for j in 1..=internal {
            edges.push((rng.gen_range(0..j), j));
        }
        for i in 0..internal {
            for j in i + 1..=internal {
                if rng.gen_bool(0.25) {
                    edges.push((i, j));
                }
            }
        }
        // Occasional parallel duplicates: distinct positions, same endpoints.
        for k in 0..edges.len() {
            if rng.gen_bool(0.2) {
                edges.push(edges[k]);
            }
        }
        edges.shuffle(&mut rng);
        let mut candidates: Vec<usize> = (1..=internal).collect();
        candidates.shuffle(&mut rng);
        let sink_count = rng.gen_range(2..=3);
        let mut sinks: Vec<usize> = candidates.into_iter().take(sink_count).collect();
        sinks.sort_unstable();

        let edge_refs: Vec<(&str, &str)> =
            edges.iter().map(|&(a, b)| (names[a].as_str(), names[b].as_str())).collect();
        let sink_refs: Vec<&str> = sinks.iter().map(|&v| names[v].as_str()).collect();
        let Ok(net) = NetworkInstance::new("s", &sink_refs, &edge_refs) else {
            continue;
        };
        let d = decompose(&net);
        let total = d.total_paths();
        if total < 3 || total > max_total_paths || d.n() > max_n {
            continue;
        }
        out.push(net);
    }
    out
}
