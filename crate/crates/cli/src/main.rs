//! Command-line front end: solve / analyze / reduce / verify / simulate /
//! oracle / gen / export-dot.
//!
//! Exit codes: 0 solution or success, 2 infeasible or failed verification,
//! 3 unknown (timeout), 64 usage error, 65 unreadable or invalid input data.
//! JSON output carries `"schema": 1` and is byte-identical across runs for
//! identical inputs.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nudcode::colorgraph::{coloring_graph_dot, DEFAULT_HOLE_WORK};
use nudcode::flows::serialize_paths;
use nudcode::netgraph::to_dot;
use nudcode::reduction::{parse_coloring, serialize_coloring, CorpusKind, CorpusPayload};
use nudcode::{
    brute_force_assign_with_cap, build_coloring_graph, code_from_json, code_to_json,
    contamination_sets, decompose, is_berge, max_clique_size, parse_network,
    parse_paths_override, serialize_network, simulate, solve, synthesize_code, transfer_matrix,
    AttemptResult, BergeVerdict, NbarAttempt, NbarPolicy, NetcodeError, NetworkInstance, Outcome,
    PathDecomposition, PathId, SolveOptions, SolveReport, StreamAssignment, Violation,
    WitnessKind,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

#[derive(Parser)]
#[command(
    name = "nudcode",
    version,
    about = "Saturating, decodable stream assignments for single-source unit-capacity DAGs",
    propagate_version = true
)]
struct Cli {
    /// Worker slots for batch operations. The pipeline is a single logical
    /// thread; the flag fixes the interface for future parallel modes.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide feasibility and construct a stream assignment.
    Solve(SolveCmd),
    /// Print rates, overlap matrix, coloring-graph stats, ω and the Berge
    /// verdict without running the coloring search.
    Analyze(AnalyzeCmd),
    /// Transform a coloring instance into an equivalent network.
    Reduce(ReduceCmd),
    /// Check an assignment or coefficient file against a network.
    Verify(VerifyCmd),
    /// Transmit random messages through a coefficient file and decode.
    Simulate(SimulateCmd),
    /// Exhaustive assignment search (independent of the coloring pipeline).
    Oracle(OracleCmd),
    /// Write example instances.
    Gen(GenCmd),
    /// Render the network (or its coloring graph) as Graphviz.
    ExportDot(ExportDotCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug)]
enum NbarArg {
    Auto,
    Fixed(usize),
}

fn parse_nbar(s: &str) -> Result<NbarArg, String> {
    if s == "auto" {
        return Ok(NbarArg::Auto);
    }
    s.parse::<usize>()
        .ok()
        .filter(|&k| k >= 1)
        .map(NbarArg::Fixed)
        .ok_or_else(|| format!("expected `auto` or a positive integer, got `{s}`"))
}

#[derive(Args)]
struct SolveCmd {
    /// Network instance file.
    net: PathBuf,
    /// Path decomposition override (per-sink routings to use verbatim).
    #[arg(long)]
    paths: Option<PathBuf>,
    /// Stream budget: a number, or `auto` to try n..n+3.
    #[arg(long, default_value = "auto", value_parser = parse_nbar)]
    nbar: NbarArg,
    /// Search seed (falls back to $NUDCODE_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Coloring-search time limit in seconds; 0 disables it.
    #[arg(long, default_value_t = 30)]
    timeout: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write network.dot and the coloring graph into this directory.
    #[arg(long, value_name = "DIR")]
    emit_dot: Option<PathBuf>,
    /// Write synthesized coding coefficients (JSON) when a solution exists.
    #[arg(long, value_name = "FILE")]
    emit_code: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeCmd {
    net: PathBuf,
    #[arg(long)]
    paths: Option<PathBuf>,
    /// Budget for the coloring graph; `auto` means the largest sink rate.
    #[arg(long, default_value = "auto", value_parser = parse_nbar)]
    nbar: NbarArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ReduceCmd {
    /// Coloring instance file (`vertex`, `edge`, `colors` lines).
    coloring_file: PathBuf,
    /// Output network file.
    #[arg(short, long)]
    out: PathBuf,
    /// Also write the gadget's path decomposition (solvers must use it).
    #[arg(long, value_name = "FILE")]
    paths_out: Option<PathBuf>,
    /// Also write the vertex/edge → network mapping as JSON.
    #[arg(long, value_name = "FILE")]
    mapping_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCmd {
    net: PathBuf,
    /// Assignment JSON (`{"schema":1,"nbar":..,"assignment":{"1.1":1,..}}`)
    /// or a coefficient file produced by `solve --emit-code`.
    file: PathBuf,
    #[arg(long)]
    paths: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SimulateCmd {
    net: PathBuf,
    /// Coefficient file (JSON).
    code: PathBuf,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct OracleCmd {
    net: PathBuf,
    #[arg(long)]
    paths: Option<PathBuf>,
    /// Stream budget; defaults to the largest sink rate.
    #[arg(long)]
    nbar: Option<usize>,
    /// Refuse instances with more paths than this.
    #[arg(long, default_value_t = 20)]
    max_paths: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct GenCmd {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Subcommand)]
enum GenKind {
    /// Cycle coloring instance C_len.
    Cycle {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        colors: usize,
        #[arg(short, long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Complete-graph coloring instance K_k.
    Complete {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        colors: usize,
        #[arg(short, long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Erdős–Rényi G(vertices, prob) coloring instances.
    #[command(name = "random-gnp")]
    RandomGnp {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 0.3)]
        prob: f64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long, value_name = "DIR")]
        out: PathBuf,
    },
    /// The four worked example networks (with path overrides where needed).
    #[command(alias = "paper-fixtures")]
    Fixtures {
        #[arg(short, long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExportDotCmd {
    net: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Emit the coloring graph instead of the network.
    #[arg(long)]
    coloring_graph: bool,
    /// Budget for --coloring-graph; defaults to the largest sink rate.
    #[arg(long, value_parser = parse_nbar, default_value = "auto")]
    nbar: NbarArg,
    #[arg(long)]
    paths: Option<PathBuf>,
}

fn main() {
    // Die quietly when a downstream pager closes the pipe, like other
    // line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        std::process::exit(64);
    }
    let result = match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Analyze(a) => cmd_analyze(a),
        Cmd::Reduce(a) => cmd_reduce(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::ExportDot(a) => cmd_export_dot(a),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(65);
        }
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing.

fn load_network(path: &Path) -> Result<NetworkInstance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read network file `{}`", path.display()))?;
    parse_network(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_paths(g: &NetworkInstance, path: Option<&Path>) -> Result<Option<PathDecomposition>> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("cannot read paths file `{}`", p.display()))?;
            let d = parse_paths_override(g, &text).map_err(|e| anyhow!("{}: {e}", p.display()))?;
            Ok(Some(d))
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("NUDCODE_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| anyhow!("NUDCODE_SEED must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(0),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn outcome_str(o: Outcome) -> &'static str {
    match o {
        Outcome::Solution => "solution",
        Outcome::Infeasible => "infeasible",
        Outcome::Unknown => "unknown",
    }
}

fn assignment_value(a: &StreamAssignment) -> Value {
    let map: BTreeMap<String, usize> =
        a.f.iter().map(|(p, &s)| (p.to_string(), s + 1)).collect();
    json!(map)
}

fn berge_value(v: &BergeVerdict) -> Value {
    match v {
        BergeVerdict::Berge => json!({ "verdict": "berge", "witness": null }),
        BergeVerdict::Unknown => json!({ "verdict": "unknown", "witness": null }),
        BergeVerdict::NotBerge(w) => json!({
            "verdict": "not_berge",
            "witness": {
                "kind": match w.kind { WitnessKind::Hole => "hole", WitnessKind::Antihole => "antihole" },
                "vertices": w.vertices,
                "names": w.names,
            },
        }),
    }
}

fn berge_text(v: &BergeVerdict) -> String {
    match v {
        BergeVerdict::Berge => "yes".to_string(),
        BergeVerdict::Unknown => "unknown (work cap hit)".to_string(),
        BergeVerdict::NotBerge(w) => {
            let kind = match w.kind {
                WitnessKind::Hole => "hole",
                WitnessKind::Antihole => "antihole",
            };
            format!("no — odd {kind} [{}]", w.names.join(" "))
        }
    }
}

fn print_matrix(m: &[Vec<usize>]) {
    for row in m {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        println!("  {}", cells.join(" "));
    }
}

fn print_assignment(a: &StreamAssignment) {
    println!("assignment (path -> stream):");
    for (p, &s) in &a.f {
        println!("  {p} -> {}", s + 1);
    }
}

// ---------------------------------------------------------------------------
// solve

fn attempt_json(a: &NbarAttempt) -> Value {
    let (result, reason) = match &a.result {
        AttemptResult::Solution => ("solution", None),
        AttemptResult::Infeasible { reason } => ("infeasible", Some(reason.clone())),
        AttemptResult::Timeout => ("timeout", None),
    };
    json!({
        "nbar": a.nbar,
        "omega": a.omega,
        "berge": a.berge.as_ref().map(berge_value),
        "result": result,
        "reason": reason,
    })
}

fn solve_json(r: &SolveReport) -> Value {
    json!({
        "schema": 1,
        "command": "solve",
        "outcome": outcome_str(r.outcome),
        "n": r.n,
        "rates": r.rates,
        "nbar": r.nbar_used,
        "assignment": r.assignment.as_ref().map(assignment_value),
        "m": r.m,
        "attempts": r.attempts.iter().map(attempt_json).collect::<Vec<_>>(),
    })
}

fn print_solve_text(r: &SolveReport) {
    println!(
        "rates: {:?} (n = {}, {} paths)",
        r.rates,
        r.n,
        r.rates.iter().sum::<usize>()
    );
    println!("m[j][k] (paths of sink j contaminating onto sink k):");
    print_matrix(&r.m);
    for a in &r.attempts {
        let omega = a.omega.map_or("-".to_string(), |w| w.to_string());
        let berge = a.berge.as_ref().map_or("-".to_string(), berge_text);
        let result = match &a.result {
            AttemptResult::Solution => "solution".to_string(),
            AttemptResult::Infeasible { reason } => format!("infeasible ({reason})"),
            AttemptResult::Timeout => "timeout".to_string(),
        };
        println!("attempt n̄={}: ω={omega}, berge={berge} -> {result}", a.nbar);
    }
    match r.outcome {
        Outcome::Solution => {
            if let Some(a) = &r.assignment {
                print_assignment(a);
            }
            println!("outcome: solution with n̄ = {}", r.nbar_used.expect("solution has a budget"));
        }
        Outcome::Infeasible => {
            let all_clique = !r.attempts.is_empty()
                && r.attempts.iter().all(|a| {
                    matches!(a.result, AttemptResult::Infeasible { .. })
                        && a.omega.map_or(a.nbar < r.n, |w| w > a.nbar)
                });
            let budgets: Vec<String> = r.attempts.iter().map(|a| a.nbar.to_string()).collect();
            if all_clique {
                println!(
                    "outcome: infeasible — ω exceeds n̄ for every tried budget (n̄ = {})",
                    budgets.join(", ")
                );
            } else {
                println!(
                    "outcome: infeasible — no proper coloring at any tried budget (n̄ = {})",
                    budgets.join(", ")
                );
            }
        }
        Outcome::Unknown => {
            let last = r.attempts.last().map_or(0, |a| a.nbar);
            println!("outcome: unknown — search timed out at n̄ = {last}");
        }
    }
}

fn cmd_solve(a: SolveCmd) -> Result<i32> {
    let g = load_network(&a.net)?;
    let override_d = load_paths(&g, a.paths.as_deref())?;
    let seed = resolve_seed(a.seed)?;
    let deadline = (a.timeout > 0).then(|| Instant::now() + Duration::from_secs(a.timeout));
    let nbar = match a.nbar {
        NbarArg::Auto => NbarPolicy::Auto { extra: 3 },
        NbarArg::Fixed(k) => NbarPolicy::Fixed(k),
    };
    let opts = SolveOptions { nbar, seed, deadline, ..SolveOptions::default() };
    let report = solve(&g, override_d.as_ref(), opts);
    let d = override_d.unwrap_or_else(|| decompose(&g));

    if let Some(dir) = &a.emit_dot {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create `{}`", dir.display()))?;
        fs::write(dir.join("network.dot"), to_dot(&g))?;
        let nbar = report.nbar_used.unwrap_or(report.n.max(1));
        let r = contamination_sets(&g, &d);
        let cg = build_coloring_graph(&d, &r, nbar).map_err(|e| anyhow!("{e}"))?;
        fs::write(dir.join(format!("colorgraph_nbar{nbar}.dot")), coloring_graph_dot(&cg))?;
    }
    if let Some(path) = &a.emit_code {
        match (&report.assignment, report.outcome) {
            (Some(asg), Outcome::Solution) => {
                let code = synthesize_code(&g, &d, asg, seed)
                    .map_err(|e| anyhow!("coefficient synthesis failed: {e}"))?;
                fs::write(path, code_to_json(&g, &code))
                    .with_context(|| format!("cannot write `{}`", path.display()))?;
            }
            _ => eprintln!("note: no solution; coefficient file not written"),
        }
    }
    match a.format {
        Format::Text => print_solve_text(&report),
        Format::Json => print!("{}", pretty(&solve_json(&report))),
    }
    Ok(match report.outcome {
        Outcome::Solution => 0,
        Outcome::Infeasible => 2,
        Outcome::Unknown => 3,
    })
}

// ---------------------------------------------------------------------------
// analyze

fn cmd_analyze(a: AnalyzeCmd) -> Result<i32> {
    let g = load_network(&a.net)?;
    let override_d = load_paths(&g, a.paths.as_deref())?;
    let d = override_d.unwrap_or_else(|| decompose(&g));
    let r = contamination_sets(&g, &d);
    let nbar = match a.nbar {
        NbarArg::Auto => d.n(),
        NbarArg::Fixed(k) => k,
    };
    let cg = build_coloring_graph(&d, &r, nbar).map_err(|e| anyhow!("{e}"))?;
    let omega = max_clique_size(&cg).map_err(|e| anyhow!("{e}"))?;
    let verdict = is_berge(&cg.graph, DEFAULT_HOLE_WORK);
    let regulars: usize = d.rates().iter().sum();
    let vertices = cg.graph.vertex_count();
    match a.format {
        Format::Text => {
            println!("sinks:");
            for (j, sink) in g.sinks.iter().enumerate() {
                println!("  {}: {sink}, rate {}", j + 1, d.n_j(j));
            }
            println!("n = {} (largest rate); total paths = {}", d.n(), d.total_paths());
            println!("m[j][k] (paths of sink j contaminating onto sink k):");
            print_matrix(&r.m);
            println!(
                "coloring graph at n̄ = {nbar}: {vertices} vertices ({regulars} regular, {} fictitious), {} edges",
                vertices - regulars,
                cg.graph.edge_count()
            );
            println!("ω = {omega}{}", if omega > nbar { " — exceeds n̄: infeasible at this budget" } else { "" });
            println!("berge: {}", berge_text(&verdict));
        }
        Format::Json => {
            let v = json!({
                "schema": 1,
                "command": "analyze",
                "sinks": g.sinks,
                "rates": d.rates(),
                "n": d.n(),
                "total_paths": d.total_paths(),
                "m": r.m,
                "nbar": nbar,
                "vertices": vertices,
                "regular_vertices": regulars,
                "fictitious_vertices": vertices - regulars,
                "edges": cg.graph.edge_count(),
                "omega": omega,
                "berge": berge_value(&verdict),
            });
            print!("{}", pretty(&v));
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// reduce

fn cmd_reduce(a: ReduceCmd) -> Result<i32> {
    let text = fs::read_to_string(&a.coloring_file)
        .with_context(|| format!("cannot read coloring file `{}`", a.coloring_file.display()))?;
    let c = parse_coloring(&text).map_err(|e| anyhow!("{}: {e}", a.coloring_file.display()))?;
    let out = nudcode::reduce_coloring_to_network(&c).map_err(|e| anyhow!("{e}"))?;
    fs::write(&a.out, serialize_network(&out.network))
        .with_context(|| format!("cannot write `{}`", a.out.display()))?;
    println!(
        "wrote {} ({} edges, {} sinks, {} paths)",
        a.out.display(),
        out.network.edges.len(),
        out.network.sink_count(),
        out.paths.total_paths()
    );
    if let Some(p) = &a.paths_out {
        fs::write(p, serialize_paths(&out.network, &out.paths))
            .with_context(|| format!("cannot write `{}`", p.display()))?;
        println!("wrote {}", p.display());
    }
    if let Some(p) = &a.mapping_out {
        let v = json!({
            "schema": 1,
            "vertex_to_link": out.vertex_to_link,
            "edge_to_sink": out.edge_to_sink,
            "vertex_to_sink": out.vertex_to_sink,
            "final_sink": out.final_sink,
        });
        fs::write(p, pretty(&v)).with_context(|| format!("cannot write `{}`", p.display()))?;
        println!("wrote {}", p.display());
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify

fn parse_assignment_json(text: &str) -> Result<StreamAssignment> {
    let v: Value = serde_json::from_str(text).context("assignment file is not valid JSON")?;
    if v.get("schema").and_then(Value::as_u64) != Some(1) {
        bail!("assignment file must carry \"schema\": 1");
    }
    let nbar = v
        .get("nbar")
        .and_then(Value::as_u64)
        .filter(|&k| k >= 1)
        .context("assignment file needs a positive \"nbar\"")? as usize;
    let map = v
        .get("assignment")
        .and_then(Value::as_object)
        .context("assignment file needs an \"assignment\" object")?;
    let mut f = BTreeMap::new();
    for (key, sv) in map {
        let p = PathId::parse(key)
            .with_context(|| format!("bad path id `{key}` (expected `sink.slot`, 1-based)"))?;
        let s = sv
            .as_u64()
            .filter(|&s| s >= 1)
            .with_context(|| format!("bad stream for path `{key}` (1-based integer)"))?;
        f.insert(p, s as usize - 1);
    }
    Ok(StreamAssignment::new(nbar, f))
}

fn cmd_verify(a: VerifyCmd) -> Result<i32> {
    let g = load_network(&a.net)?;
    let override_d = load_paths(&g, a.paths.as_deref())?;
    let d = override_d.unwrap_or_else(|| decompose(&g));
    let r = contamination_sets(&g, &d);
    let text = fs::read_to_string(&a.file)
        .with_context(|| format!("cannot read `{}`", a.file.display()))?;
    let v: Value = serde_json::from_str(&text)
        .with_context(|| format!("`{}` is not valid JSON", a.file.display()))?;

    let mut problems: Vec<String> = Vec::new();
    let checked: &str;
    if v.get("edges").is_some() {
        checked = "coefficient file";
        let code = code_from_json(&g, &text).map_err(|e| anyhow!("{}: {e}", a.file.display()))?;
        let asg = StreamAssignment::new(code.nbar, code.f.clone());
        let violations =
            nudcode::verify_assignment(&g, &d, &r, &asg).map_err(|e| anyhow!("{e}"))?;
        problems.extend(violations.iter().map(Violation::to_string));
        for j in 0..code.sinks.len() {
            match transfer_matrix(&code, j) {
                Ok(t) => {
                    if t.inverse().is_none() {
                        problems.push(format!("sink {} transfer matrix is singular", j + 1));
                    }
                }
                Err(e) => problems.push(e.to_string()),
            }
        }
    } else {
        checked = "assignment";
        let asg = parse_assignment_json(&text)?;
        let violations =
            nudcode::verify_assignment(&g, &d, &r, &asg).map_err(|e| anyhow!("{e}"))?;
        problems.extend(violations.iter().map(Violation::to_string));
    }

    match a.format {
        Format::Text => {
            if problems.is_empty() {
                println!("{checked} is valid: saturating and decodable");
            } else {
                println!("{checked} fails verification:");
                for p in &problems {
                    println!("  {p}");
                }
            }
        }
        Format::Json => {
            let v = json!({
                "schema": 1,
                "command": "verify",
                "checked": checked,
                "valid": problems.is_empty(),
                "problems": problems,
            });
            print!("{}", pretty(&v));
        }
    }
    Ok(if problems.is_empty() { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// simulate

fn cmd_simulate(a: SimulateCmd) -> Result<i32> {
    let g = load_network(&a.net)?;
    let text = fs::read_to_string(&a.code)
        .with_context(|| format!("cannot read `{}`", a.code.display()))?;
    let code = code_from_json(&g, &text).map_err(|e| anyhow!("{}: {e}", a.code.display()))?;
    let seed = resolve_seed(a.seed)?;
    let report = match simulate(&g, &code, a.trials, seed) {
        Ok(rep) => rep,
        Err(NetcodeError::NotInvertible { sink }) => {
            eprintln!("sink {sink} cannot decode: its transfer matrix is singular");
            return Ok(2);
        }
        Err(e) => bail!("{e}"),
    };
    match a.format {
        Format::Text => {
            println!(
                "trials: {}, exact decodes: {}, rate: {:.4}",
                report.trials, report.exact, report.rate
            );
            for (j, &e) in report.per_sink.iter().enumerate() {
                println!("  sink {}: {e}/{}", j + 1, report.trials);
            }
        }
        Format::Json => {
            let v = json!({
                "schema": 1,
                "command": "simulate",
                "trials": report.trials,
                "exact": report.exact,
                "per_sink": report.per_sink,
                "rate": report.rate,
            });
            print!("{}", pretty(&v));
        }
    }
    Ok(if report.rate == 1.0 { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// oracle

fn cmd_oracle(a: OracleCmd) -> Result<i32> {
    let g = load_network(&a.net)?;
    let override_d = load_paths(&g, a.paths.as_deref())?;
    let d = override_d.unwrap_or_else(|| decompose(&g));
    let r = contamination_sets(&g, &d);
    let nbar = a.nbar.unwrap_or_else(|| d.n());
    if nbar == 0 {
        bail!("--nbar must be at least 1");
    }
    let found = brute_force_assign_with_cap(&d, &r, nbar, a.max_paths, nbar)
        .map_err(|e| anyhow!("{e}"))?;
    match a.format {
        Format::Text => match &found {
            Some(asg) => {
                println!("feasible at n̄ = {nbar} (exhaustive search)");
                print_assignment(asg);
            }
            None => println!("infeasible at n̄ = {nbar} (exhaustive search)"),
        },
        Format::Json => {
            let v = json!({
                "schema": 1,
                "command": "oracle",
                "nbar": nbar,
                "feasible": found.is_some(),
                "assignment": found.as_ref().map(assignment_value),
            });
            print!("{}", pretty(&v));
        }
    }
    Ok(if found.is_some() { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// gen

fn cmd_gen(a: GenCmd) -> Result<i32> {
    let (kind, seed, out) = match a.kind {
        GenKind::Cycle { len, colors, out } => {
            if len < 3 {
                bail!("--len must be at least 3");
            }
            if colors == 0 {
                bail!("--colors must be at least 1");
            }
            (CorpusKind::Cycle { len, colors }, 0, out)
        }
        GenKind::Complete { k, colors, out } => {
            if k == 0 {
                bail!("--k must be at least 1");
            }
            if colors == 0 {
                bail!("--colors must be at least 1");
            }
            (CorpusKind::Complete { k, colors }, 0, out)
        }
        GenKind::RandomGnp { vertices, prob, count, colors, seed, out } => {
            if vertices == 0 {
                bail!("--vertices must be at least 1");
            }
            if !(0.0..=1.0).contains(&prob) {
                bail!("--prob must lie in [0, 1]");
            }
            if count == 0 {
                bail!("--count must be at least 1");
            }
            if colors == 0 {
                bail!("--colors must be at least 1");
            }
            (
                CorpusKind::RandomGnp { vertices, prob, count, colors },
                resolve_seed(seed)?,
                out,
            )
        }
        GenKind::Fixtures { out } => (CorpusKind::Fixtures, 0, out),
    };
    fs::create_dir_all(&out).with_context(|| format!("cannot create `{}`", out.display()))?;
    for item in nudcode::generate_corpus(kind, seed) {
        match item.payload {
            CorpusPayload::Coloring(c) => {
                let path = out.join(format!("{}.col", item.name));
                fs::write(&path, serialize_coloring(&c))?;
                println!("wrote {}", path.display());
            }
            CorpusPayload::Network { network, paths_text } => {
                let path = out.join(format!("{}.net", item.name));
                fs::write(&path, serialize_network(&network))?;
                println!("wrote {}", path.display());
                if let Some(text) = paths_text {
                    let path = out.join(format!("{}.paths", item.name));
                    fs::write(&path, text)?;
                    println!("wrote {}", path.display());
                }
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// export-dot

fn cmd_export_dot(a: ExportDotCmd) -> Result<i32> {
    let g = load_network(&a.net)?;
    let dot = if a.coloring_graph {
        let override_d = load_paths(&g, a.paths.as_deref())?;
        let d = override_d.unwrap_or_else(|| decompose(&g));
        let r = contamination_sets(&g, &d);
        let nbar = match a.nbar {
            NbarArg::Auto => d.n(),
            NbarArg::Fixed(k) => k,
        };
        let cg = build_coloring_graph(&d, &r, nbar).map_err(|e| anyhow!("{e}"))?;
        coloring_graph_dot(&cg)
    } else {
        to_dot(&g)
    };
    match &a.out {
        Some(p) => {
            fs::write(p, dot).with_context(|| format!("cannot write `{}`", p.display()))?;
            println!("wrote {}", p.display());
        }
        None => print!("{dot}"),
    }
    Ok(0)
}
