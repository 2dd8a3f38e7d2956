//! Instance generators, the end-to-end pipeline, certificate verification
//! and seeded experiment sweeps.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha),
//! drawn in a fixed order: one `f64` per candidate pair `(u, v)`, `u < v`,
//! in lexicographic order.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{BicliqueWitness, Certificate, DegeneracyCertificate, InducedEmbedding};
use crate::degeneracy::{degeneracy, greedy_color};
use crate::graph::{Graph, Vertex};
use crate::grow::{degeneracy_bound, grow_to_target, GrowOptions, GrowthStage};
use crate::io::{format_graph, read_graph, CertificateFile, FormatError};
use crate::search::{find_biclique, find_biclique_budgeted, find_induced_tree_budgeted, tau_budgeted, Budget, SearchOutcome};
use crate::tree::{Pattern, RootedTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    Param(String),
}

fn param(msg: impl Into<String>) -> GenError {
    GenError::Param(msg.into())
}

fn check_p(p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(param(format!("probability {p} outside [0, 1]")))
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    check_p(p)?;
    let mut r = rng(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// `G(n, p)` with one edge of each `K_{t,t}` found deleted until none is left.
pub fn gen_biclique_free(n: usize, p: f64, t: usize, seed: u64) -> Result<Graph, GenError> {
    if t == 0 {
        return Err(param("t must be positive"));
    }
    let mut g = gen_gnp(n, p, seed)?;
    while let Some(w) = find_biclique(&g, t, t) {
        g.remove_edge(w.side_a[0], w.side_b[0]);
    }
    Ok(g)
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Point-line incidence graph of `PG(2, q)`: points are `0..N`, lines
/// `N..2N` with `N = q² + q + 1`.
pub fn gen_projective(q: usize) -> Result<Graph, GenError> {
    if !is_prime(q) || q > 13 {
        return Err(param(format!("q = {q} must be a prime at most 13")));
    }
    let mut pts = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let first = [a, b, c].into_iter().find(|&x| x != 0);
                if first == Some(1) {
                    pts.push([a, b, c]);
                }
            }
        }
    }
    let n = pts.len();
    let mut g = Graph::new(2 * n);
    for (i, p) in pts.iter().enumerate() {
        for (j, l) in pts.iter().enumerate() {
            if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0 {
                g.add_edge(i, n + j);
            }
        }
    }
    Ok(g)
}

/// A host with a planted path-induced `(ζ, η)`-uniform tree on `0..`.
#[derive(Clone, Debug)]
pub struct Planted {
    pub graph: Graph,
    pub scaffold: RootedTree,
}

/// Plants a `(ζ, η)`-uniform tree (BFS ids from `0`), adds `extra` further
/// vertices and then each other pair with probability `noise`, skipping
/// pairs that would be a chord of a root path.
pub fn gen_planted(zeta: usize, eta: usize, extra: usize, noise: f64, seed: u64) -> Result<Planted, GenError> {
    check_p(noise)?;
    if zeta == 0 && eta > 0 {
        return Err(param("zeta must be positive"));
    }
    let mut pairs = Vec::new();
    let mut level = vec![0usize];
    let mut next = 1;
    for _ in 0..eta {
        let mut new_level = Vec::new();
        for &v in &level {
            for _ in 0..zeta {
                pairs.push((next, v));
                new_level.push(next);
                next += 1;
                if next > 1 << 16 {
                    return Err(param("scaffold too large"));
                }
            }
        }
        level = new_level;
    }
    let scaffold = RootedTree::from_parents(0, pairs.iter().copied()).map_err(|e| param(e.to_string()))?;
    let size = next;
    let n = size + extra;
    let mut graph = Graph::new(n);
    for &(c, p) in &pairs {
        graph.add_edge(c, p);
    }
    let ancestor = |a: Vertex, b: Vertex| a < size && b < size && scaffold.root_path(b).contains(&a);
    let mut r = rng(seed);
    for u in 0..n {
        for v in u + 1..n {
            let roll = r.gen::<f64>();
            if roll < noise && !graph.has_edge(u, v) && !ancestor(u, v) && !ancestor(v, u) {
                graph.add_edge(u, v);
            }
        }
    }
    Ok(Planted { graph, scaffold })
}

/// A host with a planted induced cycle on `0..len`.
#[derive(Clone, Debug)]
pub struct PlantedHole {
    pub graph: Graph,
    pub hole: Vec<Vertex>,
}

/// An induced cycle `0, 1, …, len−1` plus `extra` vertices; every pair not
/// inside the cycle becomes an edge with probability `noise`.
pub fn gen_long_hole(len: usize, extra: usize, noise: f64, seed: u64) -> Result<PlantedHole, GenError> {
    check_p(noise)?;
    if len < 4 {
        return Err(param("holes need at least 4 vertices"));
    }
    let n = len + extra;
    let mut graph = Graph::new(n);
    for i in 0..len {
        graph.add_edge(i, (i + 1) % len);
    }
    let mut r = rng(seed);
    for u in 0..n {
        for v in u + 1..n {
            let roll = r.gen::<f64>();
            if v >= len && roll < noise {
                graph.add_edge(u, v);
            }
        }
    }
    Ok(PlantedHole { graph, hole: (0..len).collect() })
}

/// A generator with its parameters, written `name key=value …`.
#[derive(Clone, Debug, PartialEq)]
pub enum GenSpec {
    Gnp { n: usize, p: f64 },
    BicliqueFree { n: usize, p: f64, t: usize },
    Projective { q: usize },
    Planted { zeta: usize, eta: usize, extra: usize, noise: f64 },
    Hole { len: usize, extra: usize, noise: f64 },
}

impl GenSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GenSpec::Gnp { .. } => "gnp",
            GenSpec::BicliqueFree { .. } => "biclique_free",
            GenSpec::Projective { .. } => "projective",
            GenSpec::Planted { .. } => "planted",
            GenSpec::Hole { .. } => "hole",
        }
    }

    /// Parameters as `key=value` separated by spaces.
    pub fn params(&self) -> String {
        match self {
            GenSpec::Gnp { n, p } => format!("n={n} p={p}"),
            GenSpec::BicliqueFree { n, p, t } => format!("n={n} p={p} t={t}"),
            GenSpec::Projective { q } => format!("q={q}"),
            GenSpec::Planted { zeta, eta, extra, noise } => format!("zeta={zeta} eta={eta} extra={extra} noise={noise}"),
            GenSpec::Hole { len, extra, noise } => format!("len={len} extra={extra} noise={noise}"),
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Graph, GenError> {
        match *self {
            GenSpec::Gnp { n, p } => gen_gnp(n, p, seed),
            GenSpec::BicliqueFree { n, p, t } => gen_biclique_free(n, p, t, seed),
            GenSpec::Projective { q } => gen_projective(q),
            GenSpec::Planted { zeta, eta, extra, noise } => Ok(gen_planted(zeta, eta, extra, noise, seed)?.graph),
            GenSpec::Hole { len, extra, noise } => Ok(gen_long_hole(len, extra, noise, seed)?.graph),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.name(), self.params())
    }
}

/// Splits `name k=v …` into the name and its key-value pairs.
fn split_kv(text: &str) -> Result<(String, BTreeMap<String, String>), GenError> {
    let mut toks = text.split_whitespace();
    let name = toks.next().ok_or_else(|| param("empty generator spec"))?.to_string();
    let mut kv = BTreeMap::new();
    for tok in toks {
        let (k, v) = tok.split_once('=').ok_or_else(|| param(format!("expected key=value, got `{tok}`")))?;
        if kv.insert(k.to_string(), v.to_string()).is_some() {
            return Err(param(format!("duplicate key `{k}`")));
        }
    }
    Ok((name, kv))
}

struct Keys(BTreeMap<String, String>);

impl Keys {
    fn get<T: FromStr>(&mut self, key: &str, default: Option<T>) -> Result<T, GenError> {
        match self.0.remove(key) {
            Some(v) => v.parse().map_err(|_| param(format!("bad value `{v}` for `{key}`"))),
            None => default.ok_or_else(|| param(format!("missing `{key}`"))),
        }
    }

    fn finish(self) -> Result<(), GenError> {
        match self.0.keys().next() {
            Some(k) => Err(param(format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let (name, kv) = split_kv(s)?;
        let mut k = Keys(kv);
        let spec = match name.as_str() {
            "gnp" => GenSpec::Gnp { n: k.get("n", None)?, p: k.get("p", None)? },
            "biclique_free" => GenSpec::BicliqueFree { n: k.get("n", None)?, p: k.get("p", None)?, t: k.get("t", None)? },
            "projective" => GenSpec::Projective { q: k.get("q", None)? },
            "planted" => GenSpec::Planted {
                zeta: k.get("zeta", None)?,
                eta: k.get("eta", None)?,
                extra: k.get("extra", Some(0))?,
                noise: k.get("noise", Some(0.0))?,
            },
            "hole" => GenSpec::Hole { len: k.get("len", None)?, extra: k.get("extra", Some(0))?, noise: k.get("noise", Some(0.0))? },
            other => return Err(param(format!("unknown generator `{other}`"))),
        };
        k.finish()?;
        Ok(spec)
    }
}

// ---------------------------------------------------------------------------
// Pipeline

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub t: usize,
    pub budget_nodes: Option<u64>,
    /// Skip the bound check at the start; it is retried last.
    pub eager: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Bound,
    Biclique,
    Oracle,
    Grow,
    BoundFallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineOutcome {
    Certificate(DegeneracyCertificate),
    Biclique(BicliqueWitness),
    Embedding(InducedEmbedding),
    Budget,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub outcome: PipelineOutcome,
    pub stage: Option<Stage>,
    /// One line per stage attempted.
    pub provenance: Vec<String>,
}

impl PipelineReport {
    pub fn kind(&self) -> &'static str {
        match self.outcome {
            PipelineOutcome::Certificate(_) => "certificate",
            PipelineOutcome::Biclique(_) => "biclique",
            PipelineOutcome::Embedding(_) => "induced_tree",
            PipelineOutcome::Budget => "budget",
        }
    }

    pub fn certificate(&self) -> Option<Certificate> {
        match &self.outcome {
            PipelineOutcome::Certificate(c) => Some(Certificate::Degeneracy(c.clone())),
            PipelineOutcome::Biclique(w) => Some(Certificate::Biclique(w.clone())),
            PipelineOutcome::Embedding(e) => Some(Certificate::InducedEmbedding(e.clone())),
            PipelineOutcome::Budget => None,
        }
    }
}

fn bound_stage(g: &Graph, h: &Pattern, t: usize, provenance: &mut Vec<String>) -> Option<DegeneracyCertificate> {
    let cert = degeneracy(g);
    let bound = degeneracy_bound(h.vertex_count(), h.spread().max(1), h.height().max(1), t).main;
    let ok = bound.exceeds(cert.bound);
    provenance.push(format!("bound: degeneracy {} against {bound}: {}", cert.bound, if ok { "below" } else { "not below" }));
    ok.then_some(cert)
}

/// Tries, in order: a degeneracy certificate under the bound, `K_{t,t}`, a
/// direct search for `h`, and growing `h` from a uniform tree.
pub fn pipeline(g: &Graph, h: &Pattern, cfg: &PipelineConfig) -> PipelineReport {
    let mut provenance = Vec::new();
    let done = |outcome, stage, provenance| PipelineReport { outcome, stage: Some(stage), provenance };
    if !cfg.eager {
        if let Some(c) = bound_stage(g, h, cfg.t, &mut provenance) {
            return done(PipelineOutcome::Certificate(c), Stage::Bound, provenance);
        }
    }
    let budget = || Budget::from_option(cfg.budget_nodes);
    match find_biclique_budgeted(g, cfg.t, cfg.t, &mut budget()) {
        SearchOutcome::Found(w) => {
            provenance.push(format!("biclique: found K_{{{0},{0}}}", cfg.t));
            return done(PipelineOutcome::Biclique(w), Stage::Biclique, provenance);
        }
        SearchOutcome::NotFound => provenance.push("biclique: none".into()),
        SearchOutcome::BudgetExhausted => provenance.push("biclique: budget exhausted".into()),
    }
    match find_induced_tree_budgeted(g, h, None, None, &mut budget()) {
        SearchOutcome::Found(e) => {
            provenance.push("oracle: found".into());
            return done(PipelineOutcome::Embedding(e), Stage::Oracle, provenance);
        }
        SearchOutcome::NotFound => provenance.push("oracle: none".into()),
        SearchOutcome::BudgetExhausted => provenance.push("oracle: budget exhausted".into()),
    }
    let opts = GrowOptions { budget: cfg.budget_nodes, ..GrowOptions::default() };
    match grow_to_target(g, h, cfg.t, &opts) {
        Ok(growth) => {
            provenance.push(format!("grow: fans {:?}", growth.fans));
            return done(PipelineOutcome::Embedding(growth.embedding), Stage::Grow, provenance);
        }
        Err(GrowthStage::BudgetExhausted) => provenance.push("grow: budget exhausted".into()),
        Err(e) => provenance.push(format!("grow: {e:?}")),
    }
    if cfg.eager {
        if let Some(c) = bound_stage(g, h, cfg.t, &mut provenance) {
            return done(PipelineOutcome::Certificate(c), Stage::BoundFallback, provenance);
        }
    }
    PipelineReport { outcome: PipelineOutcome::Budget, stage: None, provenance }
}

// ---------------------------------------------------------------------------
// Verification

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub code: i32,
    pub message: String,
}

/// Re-checks a certificate file against its graph: the `graph` field
/// (relative paths resolve against the certificate's directory) unless
/// `graph_override` is given.
pub fn verify_file(cert_path: &Path, graph_override: Option<&Path>) -> Verdict {
    let malformed = |message: String| Verdict { code: EXIT_MALFORMED, message };
    let text = match std::fs::read_to_string(cert_path) {
        Ok(t) => t,
        Err(e) => return malformed(format!("{}: {e}", cert_path.display())),
    };
    let file = match CertificateFile::from_json(&text) {
        Ok(f) => f,
        Err(e) => return malformed(format!("{}: {e}", cert_path.display())),
    };
    let graph_path: PathBuf = match (graph_override, &file.graph) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                cert_path.parent().unwrap_or(Path::new(".")).join(p)
            }
        }
        (None, None) => return malformed("certificate names no graph file; pass one explicitly".into()),
    };
    let g = match read_graph(&graph_path) {
        Ok(l) => l.graph,
        Err(e) => return malformed(format!("{}: {e}", graph_path.display())),
    };
    match file.certificate.check(&g) {
        Ok(()) => Verdict { code: EXIT_VALID, message: format!("valid {} certificate", file.certificate.kind()) },
        Err(e) => Verdict { code: EXIT_INVALID, message: format!("invalid {} certificate: {e}", file.certificate.kind()) },
    }
}

// ---------------------------------------------------------------------------
// Experiments

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Gen { line: usize, source: GenError },
    #[error("target: {0}")]
    Target(String),
    #[error("config has no rows")]
    NoRows,
}

/// Parses `path k`, `star k` or `spider legs len`.
pub fn parse_target(spec: &str) -> Result<Pattern, ConfigError> {
    let toks: Vec<&str> = spec.split_whitespace().collect();
    let num = |i: usize| -> Result<usize, ConfigError> {
        toks.get(i)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ConfigError::Target(format!("bad target `{spec}`")))
    };
    let pat = match toks.first().copied() {
        Some("path") if toks.len() == 2 => Pattern::path(num(1)?),
        Some("star") if toks.len() == 2 => Pattern::star(num(1)?),
        Some("spider") if toks.len() == 3 => Pattern::spider(num(1)?, num(2)?),
        _ => return Err(ConfigError::Target(format!("bad target `{spec}`"))),
    };
    if pat.vertex_count() == 0 {
        return Err(ConfigError::Target("empty target".into()));
    }
    Ok(pat)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowSpec {
    pub gen: GenSpec,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub t: usize,
    pub target_spec: String,
    pub target: Pattern,
    pub budget_nodes: Option<u64>,
    pub eager: bool,
    pub rows: Vec<RowSpec>,
}

/// Key-value config: `t`, `target`, `budget_nodes`, `eager`, `seed` (base
/// seed for rows without one) and any number of `row = <generator>
/// [seed=<n>]` lines, in order.
pub fn parse_config(text: &str, seed_override: Option<u64>) -> Result<ExperimentConfig, ConfigError> {
    let mut t = 2;
    let mut target_spec = "path 4".to_string();
    let mut budget_nodes = Some(1_000_000);
    let mut eager = false;
    let mut base_seed = 0u64;
    let mut raw_rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |msg: String| ConfigError::Syntax { line, msg };
        let (key, value) = content.split_once('=').ok_or_else(|| syntax("expected key = value".into()))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || syntax(format!("bad value `{value}` for `{key}`"));
        match key {
            "t" => t = value.parse().map_err(|_| bad())?,
            "target" => target_spec = value.to_string(),
            "budget_nodes" => {
                budget_nodes = if value == "none" { None } else { Some(value.parse().map_err(|_| bad())?) };
            }
            "eager" => eager = value.parse().map_err(|_| bad())?,
            "seed" => base_seed = value.parse().map_err(|_| bad())?,
            "row" => raw_rows.push((line, value.to_string())),
            other => return Err(syntax(format!("unknown key `{other}`"))),
        }
    }
    if t == 0 {
        return Err(ConfigError::Syntax { line: 0, msg: "t must be positive".into() });
    }
    let base_seed = seed_override.unwrap_or(base_seed);
    let target = parse_target(&target_spec)?;
    let mut rows = Vec::new();
    for (idx, (line, value)) in raw_rows.into_iter().enumerate() {
        let mut toks: Vec<&str> = value.split_whitespace().collect();
        let mut seed = base_seed.wrapping_add(idx as u64);
        if let Some(pos) = toks.iter().position(|t| t.starts_with("seed=")) {
            let s = toks.remove(pos);
            seed = s[5..].parse().map_err(|_| ConfigError::Syntax { line, msg: format!("bad seed `{s}`") })?;
        }
        let gen = toks.join(" ").parse().map_err(|source| ConfigError::Gen { line, source })?;
        rows.push(RowSpec { gen, seed });
    }
    if rows.is_empty() {
        return Err(ConfigError::NoRows);
    }
    Ok(ExperimentConfig { t, target_spec, target, budget_nodes, eager, rows })
}

pub const CSV_HEADER: &str = "seed,generator,params,n,m,degeneracy,greedy_chi,tau,tau_exhausted,outcome,runtime_ms";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub seed: u64,
    pub generator: String,
    pub params: String,
    pub n: usize,
    pub m: usize,
    pub degeneracy: usize,
    pub greedy_chi: usize,
    /// Exact when `tau_exhausted` is false, otherwise a lower bound.
    pub tau: usize,
    pub tau_exhausted: bool,
    pub outcome: String,
    pub runtime_ms: Option<u128>,
}

impl ExperimentRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.generator,
            self.params,
            self.n,
            self.m,
            self.degeneracy,
            self.greedy_chi,
            self.tau,
            self.tau_exhausted,
            self.outcome,
            self.runtime_ms.map(|r| r.to_string()).unwrap_or_default()
        )
    }
}

/// Basic invariants of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub m: usize,
    pub degeneracy: usize,
    pub greedy_chi: usize,
    pub tau: usize,
    pub tau_exhausted: bool,
}

pub fn analyze(g: &Graph, budget_nodes: Option<u64>) -> (Analysis, DegeneracyCertificate) {
    let cert = degeneracy(g);
    let coloring = greedy_color(g, &cert).expect("fresh certificate");
    let (tau, tau_exhausted) = tau_budgeted(g, &mut Budget::from_option(budget_nodes));
    let a = Analysis {
        n: g.vertex_count(),
        m: g.edge_count(),
        degeneracy: cert.bound,
        greedy_chi: coloring.color_count(),
        tau,
        tau_exhausted,
    };
    (a, cert)
}

/// One finished experiment row with its graph and outcome.
#[derive(Clone, Debug)]
pub struct RowResult {
    pub row: ExperimentRow,
    pub graph: Graph,
    pub report: PipelineReport,
}

/// Runs every row (concurrently) and returns them in config order.
pub fn run_experiment(cfg: &ExperimentConfig, timing: bool) -> Result<Vec<RowResult>, GenError> {
    let pcfg = PipelineConfig { t: cfg.t, budget_nodes: cfg.budget_nodes, eager: cfg.eager };
    cfg.rows
        .par_iter()
        .map(|spec| {
            let start = Instant::now();
            let graph = spec.gen.generate(spec.seed)?;
            let (a, _) = analyze(&graph, cfg.budget_nodes);
            let report = pipeline(&graph, &cfg.target, &pcfg);
            let row = ExperimentRow {
                seed: spec.seed,
                generator: spec.gen.name().to_string(),
                params: spec.gen.params(),
                n: a.n,
                m: a.m,
                degeneracy: a.degeneracy,
                greedy_chi: a.greedy_chi,
                tau: a.tau,
                tau_exhausted: a.tau_exhausted,
                outcome: report.kind().to_string(),
                runtime_ms: timing.then(|| start.elapsed().as_millis()),
            };
            Ok(RowResult { row, graph, report })
        })
        .collect()
}

pub fn experiment_csv(rows: &[RowResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.row.csv_line());
    }
    out
}

/// Writes `row_NNNN.graph` for every row and `row_NNNN.json` for every row
/// with a certificate. Returns the certificate paths.
pub fn write_witnesses(dir: &Path, rows: &[RowResult]) -> Result<Vec<PathBuf>, FormatError> {
    std::fs::create_dir_all(dir)?;
    let mut certs = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let graph_name = format!("row_{i:04}.graph");
        std::fs::write(dir.join(&graph_name), format_graph(&r.graph))?;
        if let Some(certificate) = r.report.certificate() {
            let path = dir.join(format!("row_{i:04}.json"));
            std::fs::write(&path, CertificateFile { graph: Some(graph_name), certificate }.to_json())?;
            certs.push(path);
        }
    }
    Ok(certs)
}
