//! Linear network codes over GF(256) realizing a stream assignment.
//!
//! Every edge carries one field symbol per slot: a linear combination of its
//! tail's inputs (unit stream vectors at source edges, upstream edge symbols
//! elsewhere). A code is *support-exact* when each edge's global vector is
//! nonzero precisely on the streams that can physically reach it — random
//! coefficients achieve this with high probability, and [`synthesize_code`]
//! retries until they do and every sink's transfer matrix inverts. The
//! all-ones [`unit_code`] reproduces hand-built example codes and is allowed
//! to be degenerate (characteristic 2 cancels repeated inputs), which the
//! transfer-matrix check then reports honestly.

use crate::flows::{PathDecomposition, PathId};
use crate::netgraph::{topological_order, NetworkInstance};
use crate::solver::StreamAssignment;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetcodeError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("no support-exact invertible code found after {attempts} attempts")]
    Synthesis { attempts: usize },
    #[error("edge #{edge} carries stream {stream} outside the sink's assigned columns")]
    Support { edge: usize, stream: usize },
    #[error("edge #{edge}: stored global vector disagrees with its local combination")]
    Inconsistent { edge: usize },
    #[error("edge #{edge}: zero local coefficient would nullify an input")]
    ZeroCoefficient { edge: usize },
    #[error("sink {sink} cannot decode: its transfer matrix is singular")]
    NotInvertible { sink: usize },
    #[error("malformed code file: {0}")]
    BadCode(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

// ---------------------------------------------------------------------------
// GF(256) with polynomial x^8 + x^4 + x^3 + x + 1 (0x11B), generator 0x03.

const fn poly_mul(mut a: u8, mut b: u8) -> u8 {
    let mut r = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        let hi = a & 0x80;
        a <<= 1;
        if hi != 0 {
            a ^= 0x1B;
        }
        b >>= 1;
    }
    r
}

const fn build_exp() -> [u8; 512] {
    let mut exp = [0u8; 512];
    let mut x = 1u8;
    let mut i = 0;
    while i < 255 {
        exp[i] = x;
        exp[i + 255] = x;
        x = poly_mul(x, 3);
        i += 1;
    }
    exp
}

const fn build_log(exp: &[u8; 512]) -> [u8; 256] {
    let mut log = [0u8; 256];
    let mut i = 0;
    while i < 255 {
        log[exp[i] as usize] = i as u8;
        i += 1;
    }
    log
}

const EXP: [u8; 512] = build_exp();
const LOG: [u8; 256] = build_log(&EXP);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gf256(pub u8);

impl Gf256 {
    pub const ZERO: Gf256 = Gf256(0);
    pub const ONE: Gf256 = Gf256(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn add(self, rhs: Gf256) -> Gf256 {
        Gf256(self.0 ^ rhs.0)
    }

    /// Subtraction coincides with addition in characteristic 2.
    pub fn sub(self, rhs: Gf256) -> Gf256 {
        self.add(rhs)
    }

    pub fn mul(self, rhs: Gf256) -> Gf256 {
        if self.0 == 0 || rhs.0 == 0 {
            return Gf256(0);
        }
        Gf256(EXP[LOG[self.0 as usize] as usize + LOG[rhs.0 as usize] as usize])
    }

    pub fn inv(self) -> Result<Gf256, NetcodeError> {
        if self.0 == 0 {
            return Err(NetcodeError::ZeroInverse);
        }
        Ok(Gf256(EXP[255 - LOG[self.0 as usize] as usize]))
    }
}

impl fmt::Display for Gf256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02x}", self.0)
    }
}

impl std::ops::Add for Gf256 {
    type Output = Gf256;
    fn add(self, rhs: Gf256) -> Gf256 {
        Gf256::add(self, rhs)
    }
}

impl std::ops::Mul for Gf256 {
    type Output = Gf256;
    fn mul(self, rhs: Gf256) -> Gf256 {
        Gf256::mul(self, rhs)
    }
}

impl std::ops::AddAssign for Gf256 {
    fn add_assign(&mut self, rhs: Gf256) {
        self.0 ^= rhs.0;
    }
}

// ---------------------------------------------------------------------------
// Dense matrices over the field, row-major.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMatrix {
    rows: usize,
    cols: usize,
    a: Vec<Gf256>,
}

impl GfMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        GfMatrix { rows, cols, a: vec![Gf256::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Gf256::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gf256>>) -> Result<Self, NetcodeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(NetcodeError::Shape("ragged rows".into()));
        }
        Ok(GfMatrix { rows: r, cols: c, a: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Gf256 {
        self.a[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Gf256) {
        self.a[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Gf256] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Gf256]) -> Vec<Gf256> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| {
                let mut acc = Gf256::ZERO;
                for c in 0..self.cols {
                    acc += self.get(r, c) * v[c];
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else { continue };
            for c in 0..m.cols {
                let tmp = m.get(rank, c);
                m.set(rank, c, m.get(p, c));
                m.set(p, c, tmp);
            }
            let inv = m.get(rank, col).inv().expect("pivot nonzero");
            for c in 0..m.cols {
                let v = m.get(rank, c) * inv;
                m.set(rank, c, v);
            }
            for r in 0..m.rows {
                if r != rank && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col);
                    for c in 0..m.cols {
                        let v = m.get(r, c) + factor * m.get(rank, c);
                        m.set(r, c, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gauss–Jordan; `None` when singular (or non-square).
    pub fn inverse(&self) -> Option<GfMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = GfMatrix::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !m.get(r, col).is_zero())?;
            for c in 0..n {
                let tmp = m.get(col, c);
                m.set(col, c, m.get(p, c));
                m.set(p, c, tmp);
                let tmp = inv.get(col, c);
                inv.set(col, c, inv.get(p, c));
                inv.set(p, c, tmp);
            }
            let piv = m.get(col, col).inv().expect("pivot nonzero");
            for c in 0..n {
                let v = m.get(col, c) * piv;
                m.set(col, c, v);
                let v = inv.get(col, c) * piv;
                inv.set(col, c, v);
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col);
                for c in 0..n {
                    let v = m.get(r, c) + factor * m.get(col, c);
                    m.set(r, c, v);
                    let v = inv.get(r, c) + factor * inv.get(col, c);
                    inv.set(r, c, v);
                }
            }
        }
        Some(inv)
    }
}

// ---------------------------------------------------------------------------
// Codes.

/// One input feeding an edge's linear combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CodeInput {
    /// A source stream injected at a source-out edge (0-based).
    Stream(usize),
    /// An upstream edge's symbol.
    Edge(usize),
}

/// What one sink needs in order to decode: its terminal edges (path slot
/// order) and its assigned streams (ascending, 0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkView {
    pub terminals: Vec<usize>,
    pub streams: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    pub nbar: usize,
    /// Global coding vector per edge (length `nbar`); zero off the paths.
    pub vectors: Vec<Vec<Gf256>>,
    /// Local combination per edge; only edges with inputs appear.
    pub local: BTreeMap<usize, Vec<(CodeInput, Gf256)>>,
    pub sinks: Vec<SinkView>,
    /// Stream per path, 0-based.
    pub f: BTreeMap<PathId, usize>,
}

/// `tail->head#k`: `k` counts earlier edges with the same endpoints, so
/// parallel links get distinct keys.
pub fn edge_key(g: &NetworkInstance, e: usize) -> String {
    let edge = &g.edges[e];
    let occurrence = g.edges[..e]
        .iter()
        .filter(|o| o.tail == edge.tail && o.head == edge.head)
        .count();
    format!("{}->{}#{}", edge.tail, edge.head, occurrence)
}

/// The input structure induced by a decomposition: source-out edges combine
/// the *distinct* streams of the paths starting there (repeats would cancel in
/// characteristic 2); interior edges combine the distinct predecessor edges of
/// the paths crossing them.
fn edge_inputs(
    d: &PathDecomposition,
    a: &StreamAssignment,
    edge_count: usize,
) -> Vec<Vec<CodeInput>> {
    let mut sets: Vec<BTreeSet<CodeInput>> = vec![BTreeSet::new(); edge_count];
    for p in d.ids() {
        let path = d.path(p);
        sets[path[0]].insert(CodeInput::Stream(a.f[&p]));
        for w in path.windows(2) {
            sets[w[1]].insert(CodeInput::Edge(w[0]));
        }
    }
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Global vectors from local coefficients, in topological edge order.
fn propagate(
    g: &NetworkInstance,
    nbar: usize,
    local: &BTreeMap<usize, Vec<(CodeInput, Gf256)>>,
) -> Vec<Vec<Gf256>> {
    let order = topological_order(g);
    let mut vectors = vec![vec![Gf256::ZERO; nbar]; g.edges.len()];
    for e in order.sorted_edges(g) {
        let Some(inputs) = local.get(&e) else { continue };
        let mut v = vec![Gf256::ZERO; nbar];
        for &(input, c) in inputs {
            match input {
                CodeInput::Stream(s) => v[s] += c,
                CodeInput::Edge(prev) => {
                    for (slot, acc) in v.iter_mut().enumerate() {
                        *acc += c * vectors[prev][slot];
                    }
                }
            }
        }
        vectors[e] = v;
    }
    vectors
}

/// The streams that can physically be present on each edge: the closure of
/// the input structure. A support-exact code has exactly these nonzero slots.
pub fn edge_stream_supports(
    g: &NetworkInstance,
    d: &PathDecomposition,
    a: &StreamAssignment,
) -> Vec<BTreeSet<usize>> {
    let inputs = edge_inputs(d, a, g.edges.len());
    let order = topological_order(g);
    let mut support: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.edges.len()];
    for e in order.sorted_edges(g) {
        let mut s = BTreeSet::new();
        for &input in &inputs[e] {
            match input {
                CodeInput::Stream(k) => {
                    s.insert(k);
                }
                CodeInput::Edge(prev) => s.extend(support[prev].iter().copied()),
            }
        }
        support[e] = s;
    }
    support
}

fn sink_views(
    d: &PathDecomposition,
    a: &StreamAssignment,
) -> Result<Vec<SinkView>, NetcodeError> {
    let mut views = Vec::with_capacity(d.per_sink.len());
    for (j, paths) in d.per_sink.iter().enumerate() {
        let terminals: Vec<usize> = paths.iter().map(|p| *p.last().unwrap()).collect();
        let streams: BTreeSet<usize> =
            (0..paths.len()).map(|k| a.f[&PathId::new(j, k)]).collect();
        if streams.len() != paths.len() {
            return Err(NetcodeError::Shape(format!(
                "sink {} repeats a stream across its paths",
                j + 1
            )));
        }
        views.push(SinkView { terminals, streams: streams.into_iter().collect() });
    }
    Ok(views)
}

fn check_assignment_shape(
    g: &NetworkInstance,
    d: &PathDecomposition,
    a: &StreamAssignment,
) -> Result<(), NetcodeError> {
    if d.per_sink.len() != g.sinks.len() {
        return Err(NetcodeError::Shape("decomposition does not match the network".into()));
    }
    for p in d.ids() {
        match a.f.get(&p) {
            None => return Err(NetcodeError::Shape(format!("path {p} has no stream"))),
            Some(&s) if s >= a.nbar => {
                return Err(NetcodeError::Shape(format!("path {p} stream out of range")))
            }
            _ => {}
        }
    }
    Ok(())
}

fn assemble(
    g: &NetworkInstance,
    d: &PathDecomposition,
    a: &StreamAssignment,
    coeff: impl FnMut(usize, CodeInput) -> Gf256,
) -> Result<LinearCode, NetcodeError> {
    check_assignment_shape(g, d, a)?;
    let mut coeff = coeff;
    let inputs = edge_inputs(d, a, g.edges.len());
    let order = topological_order(g);
    let mut local: BTreeMap<usize, Vec<(CodeInput, Gf256)>> = BTreeMap::new();
    for e in order.sorted_edges(g) {
        if inputs[e].is_empty() {
            continue;
        }
        let combo: Vec<(CodeInput, Gf256)> =
            inputs[e].iter().map(|&i| (i, coeff(e, i))).collect();
        local.insert(e, combo);
    }
    let vectors = propagate(g, a.nbar, &local);
    Ok(LinearCode { nbar: a.nbar, vectors, local, sinks: sink_views(d, a)?, f: a.f.clone() })
}

/// The all-ones code: every edge XORs its inputs. Reproduces textbook example
/// codes but makes no support or invertibility promise.
pub fn unit_code(
    g: &NetworkInstance,
    d: &PathDecomposition,
    a: &StreamAssignment,
) -> Result<LinearCode, NetcodeError> {
    assemble(g, d, a, |_, _| Gf256::ONE)
}

fn mix(seed: u64, attempt: u64) -> u64 {
    seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub const SYNTHESIS_ATTEMPTS: usize = 64;

/// Random nonzero local coefficients, retried until the code is support-exact
/// and every sink's transfer matrix inverts. Deterministic in `seed`.
pub fn synthesize_code(
    g: &NetworkInstance,
    d: &PathDecomposition,
    a: &StreamAssignment,
    seed: u64,
) -> Result<LinearCode, NetcodeError> {
    check_assignment_shape(g, d, a)?;
    let expected = edge_stream_supports(g, d, a);
    for attempt in 0..SYNTHESIS_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, attempt as u64));
        let code = assemble(g, d, a, |_, _| Gf256(rng.gen_range(1u8..=255)))?;
        let support_exact = (0..g.edges.len()).all(|e| {
            let actual: BTreeSet<usize> = code.vectors[e]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(s, _)| s)
                .collect();
            actual == expected[e]
        });
        if !support_exact {
            continue;
        }
        let invertible = (0..code.sinks.len()).all(|j| {
            transfer_matrix(&code, j).map_or(false, |t| t.inverse().is_some())
        });
        if invertible {
            return Ok(code);
        }
    }
    Err(NetcodeError::Synthesis { attempts: SYNTHESIS_ATTEMPTS })
}

/// The sink's decoding system: terminal-edge vectors restricted to its
/// assigned streams. Any support outside those columns is a contamination
/// leak the assignment verifier should have caught.
pub fn transfer_matrix(code: &LinearCode, j: usize) -> Result<GfMatrix, NetcodeError> {
    let view = &code.sinks[j];
    let mut rows = Vec::with_capacity(view.terminals.len());
    for &e in &view.terminals {
        let v = &code.vectors[e];
        for (s, val) in v.iter().enumerate() {
            if !val.is_zero() && !view.streams.contains(&s) {
                return Err(NetcodeError::Support { edge: e, stream: s + 1 });
            }
        }
        rows.push(view.streams.iter().map(|&s| v[s]).collect());
    }
    GfMatrix::from_rows(rows)
}

/// Recomputes every global vector from the stored local combinations and
/// demands bit-exact agreement; rejects zero coefficients outright.
pub fn consistency_check(g: &NetworkInstance, code: &LinearCode) -> Result<(), NetcodeError> {
    for (&e, combo) in &code.local {
        if e >= g.edges.len() {
            return Err(NetcodeError::BadCode(format!("edge index #{e} out of range")));
        }
        if combo.iter().any(|(_, c)| c.is_zero()) {
            return Err(NetcodeError::ZeroCoefficient { edge: e });
        }
        for &(input, _) in combo {
            match input {
                CodeInput::Stream(s) => {
                    if s >= code.nbar {
                        return Err(NetcodeError::Inconsistent { edge: e });
                    }
                    if g.edges[e].tail != g.source {
                        return Err(NetcodeError::Inconsistent { edge: e });
                    }
                }
                CodeInput::Edge(prev) => {
                    if prev >= g.edges.len() || g.edges[prev].head != g.edges[e].tail {
                        return Err(NetcodeError::Inconsistent { edge: e });
                    }
                }
            }
        }
    }
    if code.vectors.len() != g.edges.len()
        || code.vectors.iter().any(|v| v.len() != code.nbar)
    {
        return Err(NetcodeError::Shape("one vector per edge, nbar entries each".into()));
    }
    let recomputed = propagate(g, code.nbar, &code.local);
    for e in 0..g.edges.len() {
        if recomputed[e] != code.vectors[e] {
            return Err(NetcodeError::Inconsistent { edge: e });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub trials: usize,
    /// Trials where every sink recovered its streams exactly.
    pub exact: usize,
    /// Per-sink exact-decode counts.
    pub per_sink: Vec<usize>,
    pub rate: f64,
}

/// Transmits random messages and decodes at every sink through the inverse
/// transfer matrices. With invertible matrices this is exact by linearity;
/// the simulation exists to witness that end to end.
pub fn simulate(
    g: &NetworkInstance,
    code: &LinearCode,
    trials: usize,
    seed: u64,
) -> Result<SimReport, NetcodeError> {
    consistency_check(g, code)?;
    let mut decoders = Vec::with_capacity(code.sinks.len());
    for j in 0..code.sinks.len() {
        let t = transfer_matrix(code, j)?;
        let inv = t.inverse().ok_or(NetcodeError::NotInvertible { sink: j + 1 })?;
        decoders.push(inv);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exact = 0usize;
    let mut per_sink = vec![0usize; code.sinks.len()];
    for _ in 0..trials {
        let msg: Vec<Gf256> = (0..code.nbar).map(|_| Gf256(rng.gen())).collect();
        let mut all = true;
        for (j, view) in code.sinks.iter().enumerate() {
            // Physical reception: full dot product, contaminants included.
            let received: Vec<Gf256> = view
                .terminals
                .iter()
                .map(|&e| {
                    let mut acc = Gf256::ZERO;
                    for s in 0..code.nbar {
                        acc += code.vectors[e][s] * msg[s];
                    }
                    acc
                })
                .collect();
            let decoded = decoders[j].mul_vec(&received);
            let truth: Vec<Gf256> = view.streams.iter().map(|&s| msg[s]).collect();
            if decoded == truth {
                per_sink[j] += 1;
            } else {
                all = false;
            }
        }
        if all {
            exact += 1;
        }
    }
    let rate = if trials == 0 { 1.0 } else { exact as f64 / trials as f64 };
    Ok(SimReport { trials, exact, per_sink, rate })
}

// ---------------------------------------------------------------------------
// Serialization.

fn hex_vector(v: &[Gf256]) -> String {
    v.iter().map(|x| format!("{x}")).collect()
}

fn input_key(g: &NetworkInstance, input: CodeInput) -> String {
    match input {
        CodeInput::Stream(s) => format!("stream:{}", s + 1),
        CodeInput::Edge(e) => format!("edge:{}", edge_key(g, e)),
    }
}

pub fn code_to_json(g: &NetworkInstance, code: &LinearCode) -> String {
    let mut edges = serde_json::Map::new();
    for e in 0..g.edges.len() {
        edges.insert(edge_key(g, e), serde_json::Value::String(hex_vector(&code.vectors[e])));
    }
    let mut local = serde_json::Map::new();
    for (&e, combo) in &code.local {
        let mut entry = serde_json::Map::new();
        for &(input, c) in combo {
            entry.insert(input_key(g, input), serde_json::Value::String(format!("{c}")));
        }
        local.insert(edge_key(g, e), serde_json::Value::Object(entry));
    }
    let assignment: serde_json::Map<String, serde_json::Value> = code
        .f
        .iter()
        .map(|(p, &s)| (p.to_string(), serde_json::Value::from(s + 1)))
        .collect();
    let sinks: Vec<serde_json::Value> = code
        .sinks
        .iter()
        .enumerate()
        .map(|(j, view)| {
            serde_json::json!({
                "sink": g.sinks[j],
                "terminals": view.terminals,
                "streams": view.streams.iter().map(|s| s + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "schema": 1,
        "field": "GF256/0x11B",
        "nbar": code.nbar,
        "assignment": assignment,
        "edges": edges,
        "local": local,
        "sinks": sinks,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("static structure");
    s.push('\n');
    s
}

fn parse_hex_vector(s: &str, nbar: usize, what: &str) -> Result<Vec<Gf256>, NetcodeError> {
    if s.len() != 2 * nbar || !s.is_ascii() {
        return Err(NetcodeError::BadCode(format!(
            "{what}: expected {} hex characters, got `{s}`",
            2 * nbar
        )));
    }
    (0..nbar)
        .map(|i| {
            u8::from_str_radix(&s[2 * i..2 * i + 2], 16)
                .map(Gf256)
                .map_err(|_| NetcodeError::BadCode(format!("{what}: bad hex `{s}`")))
        })
        .collect()
}

pub fn code_from_json(g: &NetworkInstance, text: &str) -> Result<LinearCode, NetcodeError> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| NetcodeError::BadCode(e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| NetcodeError::BadCode("not an object".into()))?;
    let field = obj.get("field").and_then(|v| v.as_str()).unwrap_or("");
    if field != "GF256/0x11B" {
        return Err(NetcodeError::BadCode(format!("unsupported field `{field}`")));
    }
    if obj.get("schema").and_then(|v| v.as_u64()) != Some(1) {
        return Err(NetcodeError::BadCode("unsupported schema".into()));
    }
    let nbar = obj
        .get("nbar")
        .and_then(|v| v.as_u64())
        .filter(|&n| n >= 1 && n <= 255)
        .ok_or_else(|| NetcodeError::BadCode("nbar must be in 1..=255".into()))? as usize;

    let key_to_index: BTreeMap<String, usize> =
        (0..g.edges.len()).map(|e| (edge_key(g, e), e)).collect();
    let lookup = |key: &str| -> Result<usize, NetcodeError> {
        key_to_index
            .get(key)
            .copied()
            .ok_or_else(|| NetcodeError::BadCode(format!("unknown edge `{key}`")))
    };

    let edges_obj = obj
        .get("edges")
        .and_then(|v| v.as_object())
        .ok_or_else(|| NetcodeError::BadCode("missing `edges` object".into()))?;
    let mut vectors = vec![vec![Gf256::ZERO; nbar]; g.edges.len()];
    let mut seen = vec![false; g.edges.len()];
    for (key, val) in edges_obj {
        let e = lookup(key)?;
        let hex = val
            .as_str()
            .ok_or_else(|| NetcodeError::BadCode(format!("edge `{key}`: not a string")))?;
        vectors[e] = parse_hex_vector(hex, nbar, &format!("edge `{key}`"))?;
        seen[e] = true;
    }
    if let Some(e) = seen.iter().position(|&s| !s) {
        return Err(NetcodeError::BadCode(format!("edge `{}` missing", edge_key(g, e))));
    }

    let local_obj = obj
        .get("local")
        .and_then(|v| v.as_object())
        .ok_or_else(|| NetcodeError::BadCode("missing `local` object".into()))?;
    let mut local: BTreeMap<usize, Vec<(CodeInput, Gf256)>> = BTreeMap::new();
    for (key, val) in local_obj {
        let e = lookup(key)?;
        let entry = val
            .as_object()
            .ok_or_else(|| NetcodeError::BadCode(format!("local `{key}`: not an object")))?;
        let mut combo = Vec::with_capacity(entry.len());
        for (ikey, cval) in entry {
            let input = if let Some(s) = ikey.strip_prefix("stream:") {
                let s: usize = s
                    .parse()
                    .ok()
                    .filter(|&s| s >= 1 && s <= nbar)
                    .ok_or_else(|| NetcodeError::BadCode(format!("bad input `{ikey}`")))?;
                CodeInput::Stream(s - 1)
            } else if let Some(ek) = ikey.strip_prefix("edge:") {
                CodeInput::Edge(lookup(ek)?)
            } else {
                return Err(NetcodeError::BadCode(format!("bad input `{ikey}`")));
            };
            let chex = cval
                .as_str()
                .ok_or_else(|| NetcodeError::BadCode(format!("coefficient for `{ikey}`")))?;
            let c = parse_hex_vector(chex, 1, &format!("coefficient `{ikey}`"))?[0];
            combo.push((input, c));
        }
        combo.sort_by_key(|&(i, _)| i);
        local.insert(e, combo);
    }

    let sinks_arr = obj
        .get("sinks")
        .and_then(|v| v.as_array())
        .ok_or_else(|| NetcodeError::BadCode("missing `sinks` array".into()))?;
    if sinks_arr.len() != g.sinks.len() {
        return Err(NetcodeError::BadCode(format!(
            "{} sink entries, network has {}",
            sinks_arr.len(),
            g.sinks.len()
        )));
    }
    let mut sinks = Vec::with_capacity(sinks_arr.len());
    for (j, sv) in sinks_arr.iter().enumerate() {
        let name = sv.get("sink").and_then(|v| v.as_str()).unwrap_or("");
        if name != g.sinks[j] {
            return Err(NetcodeError::BadCode(format!(
                "sink entry {j} is `{name}`, expected `{}`",
                g.sinks[j]
            )));
        }
        let grab = |key: &str| -> Result<Vec<usize>, NetcodeError> {
            sv.get(key)
                .and_then(|v| v.as_array())
                .ok_or_else(|| NetcodeError::BadCode(format!("sink `{name}`: missing {key}")))?
                .iter()
                .map(|x| {
                    x.as_u64().map(|n| n as usize).ok_or_else(|| {
                        NetcodeError::BadCode(format!("sink `{name}`: bad {key}"))
                    })
                })
                .collect()
        };
        let terminals = grab("terminals")?;
        let streams_1 = grab("streams")?;
        if terminals.iter().any(|&e| e >= g.edges.len()) {
            return Err(NetcodeError::BadCode(format!("sink `{name}`: terminal out of range")));
        }
        if streams_1.iter().any(|&s| s == 0 || s > nbar) {
            return Err(NetcodeError::BadCode(format!("sink `{name}`: stream out of range")));
        }
        if terminals.len() != streams_1.len() || terminals.is_empty() {
            return Err(NetcodeError::BadCode(format!(
                "sink `{name}`: terminals and streams must pair up"
            )));
        }
        let streams: Vec<usize> = streams_1.iter().map(|&s| s - 1).collect();
        if streams.windows(2).any(|w| w[0] >= w[1]) {
            return Err(NetcodeError::BadCode(format!(
                "sink `{name}`: streams must ascend without repeats"
            )));
        }
        sinks.push(SinkView { terminals, streams });
    }

    let mut f = BTreeMap::new();
    if let Some(assign) = obj.get("assignment").and_then(|v| v.as_object()) {
        for (key, val) in assign {
            let p = PathId::parse(key)
                .ok_or_else(|| NetcodeError::BadCode(format!("bad path id `{key}`")))?;
            let s = val
                .as_u64()
                .filter(|&s| s >= 1 && s <= nbar as u64)
                .ok_or_else(|| NetcodeError::BadCode(format!("bad stream for `{key}`")))?;
            f.insert(p, s as usize - 1);
        }
    }

    let code = LinearCode { nbar, vectors, local, sinks, f };
    consistency_check(g, &code)?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::flows::decompose;

    fn assignment(nbar: usize, entries: &[(&str, usize)]) -> StreamAssignment {
        let f: BTreeMap<PathId, usize> = entries
            .iter()
            .map(|&(id, s)| (PathId::parse(id).unwrap(), s - 1))
            .collect();
        StreamAssignment::new(nbar, f)
    }

    fn butterfly_assignment() -> StreamAssignment {
        assignment(2, &[("1.1", 1), ("1.2", 2), ("2.1", 1), ("2.2", 2)])
    }

    #[test]
    fn field_basics() {
        assert_eq!(Gf256(0x02) * Gf256(0x80), Gf256(0x1B));
        assert_eq!(Gf256(0x53) + Gf256(0x53), Gf256::ZERO);
        for a in 1..=255u8 {
            let inv = Gf256(a).inv().unwrap();
            assert_eq!(Gf256(a) * inv, Gf256::ONE, "a={a:#x}");
        }
        assert_eq!(Gf256::ZERO.inv(), Err(NetcodeError::ZeroInverse));
        // Spot-check associativity and distributivity on a fixed triple.
        let (a, b, c) = (Gf256(0x57), Gf256(0x83), Gf256(0x1C));
        assert_eq!((a * b) * c, a * (b * c));
        assert_eq!(a * (b + c), a * b + a * c);
    }

    #[test]
    fn matrix_inverse_round_trip() {
        let m = GfMatrix::from_rows(vec![
            vec![Gf256(1), Gf256(2), Gf256(3)],
            vec![Gf256(4), Gf256(5), Gf256(6)],
            vec![Gf256(7), Gf256(9), Gf256(11)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 3);
        let inv = m.inverse().unwrap();
        let v = vec![Gf256(0xAA), Gf256(0x17), Gf256(0x03)];
        assert_eq!(inv.mul_vec(&m.mul_vec(&v)), v);
        // Repeating a row kills the rank.
        let singular = GfMatrix::from_rows(vec![
            vec![Gf256(1), Gf256(2)],
            vec![Gf256(1), Gf256(2)],
        ])
        .unwrap();
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn butterfly_unit_code_matches_hand_construction() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let code = unit_code(&g, &d, &butterfly_assignment()).unwrap();
        // Edge 5 is the bottleneck w->x: it carries the XOR of both streams.
        assert_eq!(code.vectors[5], vec![Gf256::ONE, Gf256::ONE]);
        assert_eq!(code.vectors[0], vec![Gf256::ONE, Gf256::ZERO]);
        assert_eq!(code.vectors[8], vec![Gf256::ZERO, Gf256::ONE]);
        let t1 = transfer_matrix(&code, 0).unwrap();
        assert_eq!(t1.row(0), &[Gf256::ONE, Gf256::ZERO]);
        assert_eq!(t1.row(1), &[Gf256::ONE, Gf256::ONE]);
        let t2 = transfer_matrix(&code, 1).unwrap();
        assert_eq!(t2.row(0), &[Gf256::ONE, Gf256::ONE]);
        assert_eq!(t2.row(1), &[Gf256::ZERO, Gf256::ONE]);
        consistency_check(&g, &code).unwrap();
        let report = simulate(&g, &code, 200, 7).unwrap();
        assert_eq!(report.exact, 200);
        assert_eq!(report.rate, 1.0);
    }

    #[test]
    fn shared_source_edge_injects_each_stream_once() {
        // Both sinks' paths start on edge 0 with the same stream; a repeat
        // would XOR to zero and kill the code.
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let code = unit_code(&g, &d, &butterfly_assignment()).unwrap();
        assert_eq!(code.local[&0], vec![(CodeInput::Stream(0), Gf256::ONE)]);
        assert_eq!(
            code.local[&5],
            vec![(CodeInput::Edge(2), Gf256::ONE), (CodeInput::Edge(3), Gf256::ONE)]
        );
    }

    #[test]
    fn synthesized_codes_are_support_exact_and_decodable() {
        let g = fixtures::extended_butterfly();
        let d = decompose(&g);
        let a = assignment(
            3,
            &[("1.1", 2), ("1.2", 3), ("2.1", 2), ("2.2", 3), ("2.3", 1)],
        );
        let code = synthesize_code(&g, &d, &a, 42).unwrap();
        consistency_check(&g, &code).unwrap();
        let expected = edge_stream_supports(&g, &d, &a);
        for e in 0..g.edges.len() {
            let actual: BTreeSet<usize> = code.vectors[e]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(s, _)| s)
                .collect();
            assert_eq!(actual, expected[e], "edge {e}");
        }
        let t2 = transfer_matrix(&code, 1).unwrap();
        assert_eq!((t2.rows(), t2.cols()), (3, 3));
        assert!(t2.inverse().is_some());
        let report = simulate(&g, &code, 500, 1).unwrap();
        assert_eq!(report.exact, 500);
        assert_eq!(report.per_sink, vec![500, 500]);
    }

    #[test]
    fn synthesis_is_deterministic_per_seed() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let a = butterfly_assignment();
        let c1 = synthesize_code(&g, &d, &a, 9).unwrap();
        let c2 = synthesize_code(&g, &d, &a, 9).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn disjoint_paths_give_permutation_transfer_matrices() {
        let g = crate::netgraph::parse_network(
            "source s\nsink t1\nsink t2\nedge s t1\nedge s t2\n",
        )
        .unwrap();
        let d = decompose(&g);
        let a = assignment(1, &[("1.1", 1), ("2.1", 1)]);
        let code = synthesize_code(&g, &d, &a, 0).unwrap();
        for j in 0..2 {
            let t = transfer_matrix(&code, j).unwrap();
            assert_eq!((t.rows(), t.cols()), (1, 1));
            assert!(!t.get(0, 0).is_zero());
        }
    }

    #[test]
    fn degenerate_unit_code_is_reported_not_masked() {
        // Crossed streams: edge 0 carries both, XOR cancellation zeroes the
        // bottleneck, and sink 1's matrix goes singular.
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let a = assignment(2, &[("1.1", 1), ("1.2", 2), ("2.1", 2), ("2.2", 1)]);
        let code = unit_code(&g, &d, &a).unwrap();
        assert_eq!(code.vectors[5], vec![Gf256::ZERO, Gf256::ZERO]);
        assert_eq!(
            simulate(&g, &code, 10, 0),
            Err(NetcodeError::NotInvertible { sink: 1 })
        );
    }

    #[test]
    fn contamination_leak_raises_support_error() {
        // Sink 1 never decodes stream 3, yet path 2.1 (stream 3) shares the
        // first hop with path 1.1 — an assignment the verifier must reject,
        // and the transfer matrix refuses to paper over.
        let g = fixtures::extended_butterfly();
        let d = decompose(&g);
        let a = assignment(
            3,
            &[("1.1", 1), ("1.2", 2), ("2.1", 3), ("2.2", 1), ("2.3", 2)],
        );
        let code = unit_code(&g, &d, &a).unwrap();
        assert_eq!(
            transfer_matrix(&code, 0),
            Err(NetcodeError::Support { edge: 4, stream: 3 })
        );
    }

    #[test]
    fn terminal_supports_match_the_contamination_algebra() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let a = butterfly_assignment();
        let support = edge_stream_supports(&g, &d, &a);
        // Sink 1 terminals: edges 4 and 6. Union of supports must be the
        // assigned streams plus contaminant streams (here: all of {0, 1}).
        let union: BTreeSet<usize> =
            support[4].union(&support[6]).copied().collect();
        assert_eq!(union, BTreeSet::from([0, 1]));
        assert_eq!(support[4], BTreeSet::from([0]));
        assert_eq!(support[6], BTreeSet::from([0, 1]));
    }

    #[test]
    fn json_round_trip_is_lossless_and_deterministic() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let code = synthesize_code(&g, &d, &butterfly_assignment(), 3).unwrap();
        let text = code_to_json(&g, &code);
        let parsed = code_from_json(&g, &text).unwrap();
        assert_eq!(parsed, code);
        assert_eq!(code_to_json(&g, &parsed), text);
        assert!(text.contains("\"field\": \"GF256/0x11B\""));
        assert!(text.contains("s->u#0"));
    }

    #[test]
    fn tampered_json_is_rejected() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let code = unit_code(&g, &d, &butterfly_assignment()).unwrap();
        let text = code_to_json(&g, &code);
        // Flip the bottleneck vector: consistency must catch it.
        let tampered = text.replace("\"w->x#0\": \"0101\"", "\"w->x#0\": \"0102\"");
        assert_ne!(tampered, text);
        assert_eq!(code_from_json(&g, &tampered), Err(NetcodeError::Inconsistent { edge: 5 }));
        // Zero out a local coefficient.
        let zeroed = text.replace(
            "\"edge:u->w#0\": \"01\"",
            "\"edge:u->w#0\": \"00\"",
        );
        assert_ne!(zeroed, text);
        assert_eq!(code_from_json(&g, &zeroed), Err(NetcodeError::ZeroCoefficient { edge: 5 }));
        // Wrong field marker.
        let wrong = text.replace("GF256/0x11B", "GF256/0x11D");
        assert!(matches!(code_from_json(&g, &wrong), Err(NetcodeError::BadCode(_))));
    }

    #[test]
    fn parallel_edges_get_distinct_keys() {
        let g = crate::netgraph::parse_network(
            "source s\nsink t\nedge s t\nedge s t\n",
        )
        .unwrap();
        assert_eq!(edge_key(&g, 0), "s->t#0");
        assert_eq!(edge_key(&g, 1), "s->t#1");
    }

    #[test]
    fn zero_message_decodes_to_zero() {
        let g = fixtures::butterfly();
        let d = decompose(&g);
        let code = unit_code(&g, &d, &butterfly_assignment()).unwrap();
        let t1 = transfer_matrix(&code, 0).unwrap();
        let zero = vec![Gf256::ZERO; 2];
        assert_eq!(t1.inverse().unwrap().mul_vec(&t1.mul_vec(&zero)), zero);
    }
}
