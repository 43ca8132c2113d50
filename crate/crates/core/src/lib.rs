//! Saturating, decodable network coding on unit-capacity DAGs with one source and
//! many sinks, where every sink demands its own max-flow rate.
//!
//! The pipeline: per-sink max-flow path decomposition ([`flows`]), shared-edge
//! contamination analysis ([`contamination`]), a coloring-graph transformation
//! ([`colorgraph`]), exact coloring ([`coloring`]), stream assignment and
//! verification ([`solver`]), and GF(256) linear code synthesis plus simulation
//! ([`netcode`]). [`reduction`] turns arbitrary graph-coloring instances into
//! equivalent network instances, witnessing the hardness of the decision problem.

pub mod netgraph;
pub mod flows;
pub mod contamination;
pub mod ugraph;
pub mod coloring;
pub mod colorgraph;
pub mod netcode;
pub mod solver;
pub mod reduction;
pub mod fixtures;

pub use contamination::{contamination_sets, overlap_matrix, ContaminationReport};
pub use coloring::{chromatic_number_oracle, color_exact, two_colorable, Coloring};
pub use colorgraph::{
    brute_force_max_clique, build_coloring_graph, find_odd_hole_or_antihole, is_berge,
    max_clique_size, BergeVerdict, ColoringGraph, CycleWitness, HoleSearch, WitnessKind,
};
pub use flows::{decompose, maxflow_value, parse_paths_override, PathDecomposition, PathId};
pub use netcode::{
    code_from_json, code_to_json, simulate, synthesize_code, transfer_matrix, unit_code, Gf256,
    GfMatrix, LinearCode, NetcodeError, SimReport,
};
pub use netgraph::{parse_network, serialize_network, topological_order, Edge, NetworkInstance};
pub use reduction::{
    check_equivalence, generate_corpus, reduce_coloring_to_network, ColoringInstance,
    ReductionOutput,
};
pub use solver::{
    brute_force_assign, brute_force_assign_with_cap, solve, verify_assignment, AttemptResult,
    NbarAttempt, NbarPolicy, Outcome, SolveOptions, SolveReport, SolverError, StreamAssignment,
    Violation,
};
pub use ugraph::SimpleGraph;
