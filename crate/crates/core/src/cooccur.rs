//! Matched-keyword co-occurrence networks for one (system, SDG).
//!
//! The co-occurrence unit is the document: two literals co-occur when both
//! were hit anywhere in the same labeled document. Node labels are literal
//! labels (`stem`, or `stem*` for wildcards).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::matcher::LabelMatrix;
use crate::sdg::Sdg;

/// Minimum edge weight used for the published networks.
pub const DEFAULT_MIN_EDGE_WEIGHT: u64 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CooccurError {
    #[error("unknown system {0:?}")]
    UnknownSystem(String),
    #[error("network is empty; nothing to export")]
    EmptyNetwork,
    #[error("unknown network format {0:?} (expected pajek or vosviewer)")]
    UnknownFormat(String),
    #[error("malformed {format} input at line {line}: {message}")]
    Parse {
        format: &'static str,
        line: usize,
        message: String,
    },
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    /// Selected documents with a hit on this literal.
    pub count: u64,
    /// Meso topic holding most of those documents, ties to the smaller id.
    pub cluster: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    /// `a < b`.
    pub a: String,
    pub b: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceNetwork {
    pub system: String,
    pub sdg: Sdg,
    pub min_edge_weight: u64,
    /// Sorted by label; only nodes with at least one retained edge.
    pub nodes: Vec<Node>,
    /// Sorted by `(a, b)`.
    pub edges: Vec<Edge>,
}

impl CooccurrenceNetwork {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Default)]
struct Tally {
    nodes: HashMap<String, u64>,
    node_topics: HashMap<(String, String), u64>,
    edges: HashMap<(String, String), u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.nodes {
            *self.nodes.entry(k).or_default() += v;
        }
        for (k, v) in other.node_topics {
            *self.node_topics.entry(k).or_default() += v;
        }
        for (k, v) in other.edges {
            *self.edges.entry(k).or_default() += v;
        }
        self
    }
}

/// Builds the network over labeled documents of `(system, sdg)`, optionally
/// restricted to documents whose meso topic is in `topic_filter`.
pub fn build_network(
    labels: &LabelMatrix,
    corpus: &Corpus,
    system: &str,
    sdg: Sdg,
    min_edge_weight: u64,
    topic_filter: Option<&BTreeSet<String>>,
) -> Result<CooccurrenceNetwork, CooccurError> {
    if !labels.systems().iter().any(|s| s == system) {
        return Err(CooccurError::UnknownSystem(system.to_string()));
    }
    let docs: Vec<(&str, Option<&str>)> = labels
        .docs_for(system, sdg)
        .into_iter()
        .map(|id| (id, corpus.get(id).and_then(|d| d.meso())))
        .filter(|(_, meso)| match topic_filter {
            None => true,
            Some(filter) => meso.is_some_and(|m| filter.contains(m)),
        })
        .collect();

    let tally = docs
        .par_iter()
        .fold(Tally::default, |mut t, &(id, meso)| {
            let stems: Vec<String> = labels.hit_labels(id, system, sdg).into_iter().collect();
            for (i, a) in stems.iter().enumerate() {
                *t.nodes.entry(a.clone()).or_default() += 1;
                if let Some(m) = meso {
                    *t.node_topics.entry((a.clone(), m.to_string())).or_default() += 1;
                }
                for b in &stems[i + 1..] {
                    *t.edges.entry((a.clone(), b.clone())).or_default() += 1;
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge);

    let edges: Vec<Edge> = tally
        .edges
        .into_iter()
        .filter(|&(_, w)| w >= min_edge_weight)
        .map(|((a, b), weight)| Edge { a, b, weight })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let linked: BTreeSet<&str> = edges.iter().flat_map(|e| [e.a.as_str(), e.b.as_str()]).collect();

    let mut clusters: BTreeMap<&str, (u64, &str)> = BTreeMap::new();
    let mut topic_counts: Vec<(&(String, String), &u64)> = tally.node_topics.iter().collect();
    topic_counts.sort();
    for ((label, meso), &n) in topic_counts {
        let best = clusters.entry(label.as_str()).or_insert((n, meso.as_str()));
        if n > best.0 {
            *best = (n, meso.as_str());
        }
    }
    let nodes = linked
        .iter()
        .map(|&label| Node {
            label: label.to_string(),
            count: tally.nodes[label],
            cluster: clusters.get(label).map(|(_, m)| m.to_string()),
        })
        .collect();
    Ok(CooccurrenceNetwork {
        system: system.to_string(),
        sdg,
        min_edge_weight,
        nodes,
        edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkFormat {
    Pajek,
    VosViewer,
}

impl FromStr for NetworkFormat {
    type Err = CooccurError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pajek" => Ok(NetworkFormat::Pajek),
            "vosviewer" => Ok(NetworkFormat::VosViewer),
            other => Err(CooccurError::UnknownFormat(other.to_string())),
        }
    }
}

fn node_ids(net: &CooccurrenceNetwork) -> HashMap<&str, usize> {
    net.nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.label.as_str(), i + 1))
        .collect()
}

/// Pajek `.net`: `*Vertices n`, `id "label"` lines (1-based), `*Edges`, `id id weight` lines.
pub fn to_pajek(net: &CooccurrenceNetwork) -> Result<String, CooccurError> {
    if net.is_empty() {
        return Err(CooccurError::EmptyNetwork);
    }
    let ids = node_ids(net);
    let mut out = String::new();
    writeln!(out, "*Vertices {}", net.nodes.len()).unwrap();
    for (i, n) in net.nodes.iter().enumerate() {
        writeln!(out, "{} \"{}\"", i + 1, n.label.replace('"', "'")).unwrap();
    }
    out.push_str("*Edges\n");
    for e in &net.edges {
        writeln!(out, "{} {} {}", ids[e.a.as_str()], ids[e.b.as_str()], e.weight).unwrap();
    }
    Ok(out)
}

/// VOSviewer map file (`id\tlabel\tweight` header, node count as weight) and
/// network file (`id\tid\tweight`, no header).
pub fn to_vosviewer(net: &CooccurrenceNetwork) -> Result<(String, String), CooccurError> {
    if net.is_empty() {
        return Err(CooccurError::EmptyNetwork);
    }
    let ids = node_ids(net);
    let mut map = String::from("id\tlabel\tweight\n");
    for (i, n) in net.nodes.iter().enumerate() {
        writeln!(map, "{}\t{}\t{}", i + 1, n.label, n.count).unwrap();
    }
    let mut network = String::new();
    for e in &net.edges {
        writeln!(network, "{}\t{}\t{}", ids[e.a.as_str()], ids[e.b.as_str()], e.weight).unwrap();
    }
    Ok((map, network))
}

/// Writes the network next to `stem` (`stem.net`, or `stem_map.txt` and
/// `stem_network.txt`) and returns the written paths.
pub fn export_network(
    net: &CooccurrenceNetwork,
    format: NetworkFormat,
    stem: &Path,
) -> Result<Vec<PathBuf>, CooccurError> {
    let files: Vec<(PathBuf, String)> = match format {
        NetworkFormat::Pajek => vec![(stem.with_extension("net"), to_pajek(net)?)],
        NetworkFormat::VosViewer => {
            let (map, network) = to_vosviewer(net)?;
            let base = stem
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            vec![
                (stem.with_file_name(format!("{base}_map.txt")), map),
                (stem.with_file_name(format!("{base}_network.txt")), network),
            ]
        }
    };
    let mut written = Vec::new();
    for (path, body) in files {
        fs::write(&path, body).map_err(|source| CooccurError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}

/// Node labels (with weights when the format carries them) and labelled edges
/// read back from an export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedNetwork {
    pub nodes: Vec<(String, Option<u64>)>,
    pub edges: Vec<(String, String, u64)>,
}

impl ParsedNetwork {
    pub fn of(net: &CooccurrenceNetwork, with_weights: bool) -> Self {
        ParsedNetwork {
            nodes: net
                .nodes
                .iter()
                .map(|n| (n.label.clone(), with_weights.then_some(n.count)))
                .collect(),
            edges: net.edges.iter().map(|e| (e.a.clone(), e.b.clone(), e.weight)).collect(),
        }
    }
}

fn parse_err(format: &'static str, line: usize, message: impl Into<String>) -> CooccurError {
    CooccurError::Parse {
        format,
        line,
        message: message.into(),
    }
}

fn resolve_edges(
    format: &'static str,
    labels: &BTreeMap<usize, String>,
    raw: Vec<(usize, usize, usize, u64)>,
) -> Result<Vec<(String, String, u64)>, CooccurError> {
    let mut edges = Vec::with_capacity(raw.len());
    for (line, a, b, w) in raw {
        let la = labels
            .get(&a)
            .ok_or_else(|| parse_err(format, line, format!("unknown vertex {a}")))?;
        let lb = labels
            .get(&b)
            .ok_or_else(|| parse_err(format, line, format!("unknown vertex {b}")))?;
        let (x, y) = if la <= lb { (la, lb) } else { (lb, la) };
        edges.push((x.clone(), y.clone(), w));
    }
    edges.sort();
    Ok(edges)
}

pub fn parse_pajek(text: &str) -> Result<ParsedNetwork, CooccurError> {
    const F: &str = "pajek";
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(F, 1, "empty input"))?;
    let n: usize = header
        .strip_prefix("*Vertices ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_err(F, 1, "expected *Vertices n"))?;
    let mut labels = BTreeMap::new();
    for _ in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| parse_err(F, 0, "missing vertex lines"))?;
        let (id, rest) = line
            .split_once(' ')
            .ok_or_else(|| parse_err(F, ln, "expected id \"label\""))?;
        let id: usize = id.parse().map_err(|_| parse_err(F, ln, "bad vertex id"))?;
        let label = rest
            .strip_prefix('"')
            .and_then(|r| r.strip_suffix('"'))
            .ok_or_else(|| parse_err(F, ln, "label must be quoted"))?;
        labels.insert(id, label.to_string());
    }
    match lines.next() {
        Some((_, "*Edges")) => {}
        Some((ln, _)) => return Err(parse_err(F, ln, "expected *Edges")),
        None => return Err(parse_err(F, n + 2, "missing *Edges")),
    }
    let mut raw = Vec::new();
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b, w] = parts[..] else {
            return Err(parse_err(F, ln, "expected id id weight"));
        };
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_err(F, ln, format!("bad number {s:?}")))
        };
        raw.push((ln, num(a)? as usize, num(b)? as usize, num(w)?));
    }
    let edges = resolve_edges(F, &labels, raw)?;
    let mut nodes: Vec<(String, Option<u64>)> = labels.into_values().map(|l| (l, None)).collect();
    nodes.sort();
    Ok(ParsedNetwork { nodes, edges })
}

pub fn parse_vosviewer(map: &str, network: &str) -> Result<ParsedNetwork, CooccurError> {
    const F: &str = "vosviewer";
    let mut lines = map.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, "id\tlabel\tweight")) => {}
        _ => return Err(parse_err(F, 1, "expected map header id<TAB>label<TAB>weight")),
    }
    let mut labels = BTreeMap::new();
    let mut nodes = Vec::new();
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split('\t').collect();
        let [id, label, w] = parts[..] else {
            return Err(parse_err(F, ln, "expected 3 columns"));
        };
        let id: usize = id.parse().map_err(|_| parse_err(F, ln, "bad id"))?;
        let w: u64 = w.parse().map_err(|_| parse_err(F, ln, "bad weight"))?;
        labels.insert(id, label.to_string());
        nodes.push((label.to_string(), Some(w)));
    }
    let mut raw = Vec::new();
    for (i, line) in network.lines().enumerate() {
        let ln = i + 1;
        let parts: Vec<&str> = line.split('\t').collect();
        let [a, b, w] = parts[..] else {
            return Err(parse_err(F, ln, "expected 3 columns"));
        };
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_err(F, ln, format!("bad number {s:?}")))
        };
        raw.push((ln, num(a)? as usize, num(b)? as usize, num(w)?));
    }
    let edges = resolve_edges(F, &labels, raw)?;
    nodes.sort();
    Ok(ParsedNetwork { nodes, edges })
}
