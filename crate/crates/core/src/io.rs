//! Text formats: edge-list graphs, rooted target trees, and JSON certificate
//! files.
//!
//! ```text
//! # comment
//! p 4 3
//! e 0 1
//! e 1 2
//! e 2 3
//! r 0        (tree files only)
//! ```
//!
//! Labels that are not dense ids in `0..n` are relabelled in order of first
//! appearance; the original labels are kept in [`Labelled::labels`].

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::Certificate;
use crate::graph::{Graph, GraphError};
use crate::tree::{Pattern, TreeError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `p <n> <m>` header")]
    MissingHeader,
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("more than {n} distinct vertex labels")]
    TooManyLabels { n: usize },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("tree file: {0}")]
    Tree(#[from] TreeError),
    #[error("tree file has no `r <root>` line")]
    MissingRoot,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// A parsed graph with the label of each dense id.
#[derive(Clone, Debug)]
pub struct Labelled {
    pub graph: Graph,
    pub labels: Vec<String>,
    pub root: Option<usize>,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("bad {what} `{tok}`")))
}

/// Parses the edge-list format. Loops and repeated edges are errors.
pub fn parse_graph(text: &str) -> Result<Labelled, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw_edges: Vec<(usize, String, String)> = Vec::new();
    let mut root_label: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                let n = parse_count(toks.next(), line, "vertex count")?;
                let m = parse_count(toks.next(), line, "edge count")?;
                header = Some((n, m));
            }
            Some("e") => {
                if header.is_none() {
                    return Err(FormatError::MissingHeader);
                }
                let u = toks.next().ok_or_else(|| syntax(line, "edge needs two ends"))?;
                let v = toks.next().ok_or_else(|| syntax(line, "edge needs two ends"))?;
                raw_edges.push((line, u.to_string(), v.to_string()));
            }
            Some("r") => {
                let r = toks.next().ok_or_else(|| syntax(line, "missing root"))?;
                root_label = Some((line, r.to_string()));
            }
            Some(other) => return Err(syntax(line, format!("unknown record `{other}`"))),
            None => unreachable!("blank lines skipped"),
        }
        if toks.next().is_some() {
            return Err(syntax(line, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or(FormatError::MissingHeader)?;
    if raw_edges.len() != m {
        return Err(FormatError::EdgeCount { declared: m, found: raw_edges.len() });
    }

    let dense = |s: &str| s.parse::<usize>().ok().filter(|&v| v < n);
    let all_dense = raw_edges.iter().all(|(_, u, v)| dense(u).is_some() && dense(v).is_some())
        && root_label.as_ref().is_none_or(|(_, r)| dense(r).is_some());
    let mut labels: Vec<String>;
    let mut ids: HashMap<String, usize> = HashMap::new();
    if all_dense {
        labels = (0..n).map(|v| v.to_string()).collect();
        for (v, l) in labels.iter().enumerate() {
            ids.insert(l.clone(), v);
        }
    } else {
        labels = Vec::new();
        let names = raw_edges
            .iter()
            .flat_map(|(_, u, v)| [u, v])
            .chain(root_label.as_ref().map(|(_, r)| r));
        for name in names {
            if !ids.contains_key(name) {
                if labels.len() == n {
                    return Err(FormatError::TooManyLabels { n });
                }
                ids.insert(name.clone(), labels.len());
                labels.push(name.clone());
            }
        }
        while labels.len() < n {
            labels.push(format!("_{}", labels.len()));
        }
    }
    let mut graph = Graph::new(n);
    for (line, u, v) in &raw_edges {
        graph
            .try_add_edge(ids[u], ids[v])
            .map_err(|source| FormatError::Graph { line: *line, source })?;
    }
    let root = root_label.map(|(_, r)| ids[&r]);
    Ok(Labelled { graph, labels, root })
}

pub fn read_graph(path: &Path) -> Result<Labelled, FormatError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Writes the edge-list format with dense ids.
pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

/// Parses a target tree: the graph format plus an `r <root>` line.
pub fn parse_pattern(text: &str) -> Result<Pattern, FormatError> {
    let l = parse_graph(text)?;
    let root = match l.root {
        Some(r) => r,
        None if l.graph.vertex_count() <= 1 => 0,
        None => return Err(FormatError::MissingRoot),
    };
    Ok(Pattern::new(l.graph.vertex_count(), l.graph.edges().collect(), root)?)
}

pub fn format_pattern(p: &Pattern) -> String {
    let mut out = format!("p {} {}\n", p.vertex_count(), p.edges().len());
    for &(u, v) in p.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    let _ = writeln!(out, "r {}", p.root());
    out
}

/// A certificate on disk, optionally naming the graph file it refers to.
/// A relative `graph` path is resolved against the certificate's directory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(flatten)]
    pub certificate: Certificate,
}

impl CertificateFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialise") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }
}
