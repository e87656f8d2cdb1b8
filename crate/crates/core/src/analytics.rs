//! Comparative analytics over a [`LabelMatrix`].
//!
//! Topic-level analytics use the meso level of the topic taxonomy. Documents
//! without a topic assignment count towards coverage and paper-level
//! similarity but are excluded from topic vectors, distributions and diversity.
//!
//! Cells that cannot be computed (a system with no labels for an SDG, a zero
//! topic vector) are `None` and written as `NA`, never as 0.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::corpus::{Corpus, TopicTaxonomy};
use crate::matcher::LabelMatrix;
use crate::sdg::Sdg;

/// Tolerance on `Σ p_i = 1` accepted by [`diversity`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum AnalyticsError {
    #[error("vector dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("vector entries must be non-negative and finite, got {0}")]
    InvalidEntry(f64),
    #[error("topic distribution sums to {0}, expected 1")]
    Unnormalized(f64),
    #[error("topic {0:?} is not in the topic similarity matrix")]
    UnknownTopic(String),
    #[error("topic similarity: {0}")]
    Similarity(String),
    #[error("unknown system {0:?}")]
    UnknownSystem(String),
    #[error("top-k needs k >= 1")]
    ZeroK,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = AnalyticsError> = std::result::Result<T, E>;

pub fn format_value(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdgCoverage {
    pub sdg: Sdg,
    pub docs: usize,
    /// `docs / labeled_docs`; `None` when the system labeled nothing.
    pub share: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemCoverage {
    pub system: String,
    pub labeled_docs: usize,
    pub coverage: f64,
    pub per_sdg: Vec<SdgCoverage>,
}

impl SystemCoverage {
    /// Sum of per-SDG shares; above 1 whenever documents carry several SDGs.
    pub fn share_sum(&self) -> Option<f64> {
        (self.labeled_docs > 0).then(|| self.per_sdg.iter().filter_map(|c| c.share).sum())
    }

    pub fn sdg(&self, sdg: Sdg) -> &SdgCoverage {
        &self.per_sdg[sdg.index()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub n_docs: usize,
    pub systems: Vec<SystemCoverage>,
}

impl CoverageReport {
    pub fn system(&self, name: &str) -> Option<&SystemCoverage> {
        self.systems.iter().find(|s| s.system == name)
    }

    /// `system,labeled_docs,coverage,sdg,sdg_docs,sdg_share`: 17 rows per
    /// system plus an `ALL` row carrying the label total and the share sum.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["system", "labeled_docs", "coverage", "sdg", "sdg_docs", "sdg_share"])?;
        for s in &self.systems {
            let head = [s.system.clone(), s.labeled_docs.to_string(), s.coverage.to_string()];
            for c in &s.per_sdg {
                w.write_record(head.iter().cloned().chain([
                    c.sdg.to_string(),
                    c.docs.to_string(),
                    format_value(c.share),
                ]))?;
            }
            let total: usize = s.per_sdg.iter().map(|c| c.docs).sum();
            w.write_record(head.iter().cloned().chain([
                "ALL".to_string(),
                total.to_string(),
                format_value(s.share_sum()),
            ]))?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn coverage(labels: &LabelMatrix, corpus: &Corpus) -> CoverageReport {
    let n_docs = corpus.len();
    let mut per_system: HashMap<&str, (BTreeSet<&str>, [usize; Sdg::COUNT])> = HashMap::new();
    for k in labels.keys() {
        let entry = per_system.entry(k.system.as_str()).or_default();
        entry.0.insert(k.doc_id.as_str());
        entry.1[k.sdg.index()] += 1;
    }
    let systems = labels
        .systems()
        .iter()
        .map(|name| {
            let (docs, counts) = per_system.remove(name.as_str()).unwrap_or_default();
            let labeled = docs.len();
            SystemCoverage {
                system: name.clone(),
                labeled_docs: labeled,
                coverage: if n_docs == 0 {
                    0.0
                } else {
                    labeled as f64 / n_docs as f64
                },
                per_sdg: Sdg::all()
                    .map(|sdg| {
                        let docs = counts[sdg.index()];
                        SdgCoverage {
                            sdg,
                            docs,
                            share: (labeled > 0).then(|| docs as f64 / labeled as f64),
                        }
                    })
                    .collect(),
            }
        })
        .collect();
    CoverageReport { n_docs, systems }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopicCounts {
    pub counts: BTreeMap<String, u64>,
    /// Labeled documents left out because they carry no topic.
    pub excluded: u64,
}

impl TopicCounts {
    pub fn support(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Per (system, SDG) counts of labeled documents over meso topics.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelTopicMatrix {
    /// Meso topics held by at least one document of the corpus, sorted.
    pub topics: Vec<String>,
    pub systems: Vec<String>,
    cells: BTreeMap<(String, Sdg), TopicCounts>,
}

impl LabelTopicMatrix {
    pub fn cell(&self, system: &str, sdg: Sdg) -> Option<&TopicCounts> {
        self.cells.get(&(system.to_string(), sdg))
    }

    /// Counts laid out along [`LabelTopicMatrix::topics`].
    pub fn dense(&self, system: &str, sdg: Sdg) -> Vec<f64> {
        let cell = self.cell(system, sdg);
        self.topics
            .iter()
            .map(|t| cell.and_then(|c| c.counts.get(t)).copied().unwrap_or(0) as f64)
            .collect()
    }

    pub fn distribution(&self, system: &str, sdg: Sdg) -> TopicDistribution {
        let counts = self.cell(system, sdg).cloned().unwrap_or_default();
        TopicDistribution::from_counts(system, sdg, &counts.counts)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&str, Sdg, &TopicCounts)> {
        self.cells.iter().map(|((s, g), c)| (s.as_str(), *g, c))
    }

    /// Ranked by count descending, ties by topic id ascending.
    pub fn top_topics(&self, system: &str, sdg: Sdg, k: usize) -> Result<Vec<TopicRank>> {
        if k == 0 {
            return Err(AnalyticsError::ZeroK);
        }
        if !self.systems.iter().any(|s| s == system) {
            return Err(AnalyticsError::UnknownSystem(system.to_string()));
        }
        let Some(cell) = self.cell(system, sdg) else {
            return Ok(Vec::new());
        };
        let support = cell.support();
        let mut ranked: Vec<(&String, u64)> = cell.counts.iter().map(|(t, &c)| (t, c)).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        Ok(ranked
            .into_iter()
            .take(k)
            .map(|(t, c)| TopicRank {
                meso_id: t.clone(),
                count: c,
                fraction: c as f64 / support as f64,
            })
            .collect())
    }

    /// `system,sdg,rank,meso_id,meso_name,count,fraction` for every non-empty cell.
    pub fn write_top_topics_csv<W: Write>(&self, out: W, k: usize, taxonomy: Option<&TopicTaxonomy>) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["system", "sdg", "rank", "meso_id", "meso_name", "count", "fraction"])?;
        for system in &self.systems {
            for sdg in Sdg::all() {
                for (rank, t) in self.top_topics(system, sdg, k)?.into_iter().enumerate() {
                    let name = taxonomy.and_then(|tx| tx.meso_name(&t.meso_id)).unwrap_or("");
                    w.write_record([
                        system.as_str(),
                        &sdg.to_string(),
                        &(rank + 1).to_string(),
                        &t.meso_id,
                        name,
                        &t.count.to_string(),
                        &t.fraction.to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    /// `system,sdg,meso_id,count,p,excluded` for every non-zero entry.
    pub fn write_distribution_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["system", "sdg", "meso_id", "count", "p", "excluded"])?;
        for ((system, sdg), cell) in &self.cells {
            let support = cell.support() as f64;
            for (t, &c) in &cell.counts {
                w.write_record([
                    system.as_str(),
                    &sdg.to_string(),
                    t,
                    &c.to_string(),
                    &(c as f64 / support).to_string(),
                    &cell.excluded.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicRank {
    pub meso_id: String,
    pub count: u64,
    pub fraction: f64,
}

pub fn label_topic_matrix(labels: &LabelMatrix, corpus: &Corpus) -> LabelTopicMatrix {
    let topics: BTreeSet<String> = corpus
        .docs()
        .iter()
        .filter_map(|d| d.meso().map(String::from))
        .collect();
    let mut cells: BTreeMap<(String, Sdg), TopicCounts> = BTreeMap::new();
    for system in labels.systems() {
        for sdg in Sdg::all() {
            cells.insert((system.clone(), sdg), TopicCounts::default());
        }
    }
    for k in labels.keys() {
        let cell = cells.entry((k.system.clone(), k.sdg)).or_default();
        match corpus.get(&k.doc_id).and_then(|d| d.meso()) {
            Some(meso) => *cell.counts.entry(meso.to_string()).or_default() += 1,
            None => cell.excluded += 1,
        }
    }
    LabelTopicMatrix {
        topics: topics.into_iter().collect(),
        systems: labels.systems().to_vec(),
        cells,
    }
}

pub fn top_topics(labels: &LabelMatrix, corpus: &Corpus, system: &str, sdg: Sdg, k: usize) -> Result<Vec<TopicRank>> {
    label_topic_matrix(labels, corpus).top_topics(system, sdg, k)
}

/// Cosine of two non-negative vectors; `None` when either is all zeros.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<Option<f64>> {
    if u.len() != v.len() {
        return Err(AnalyticsError::DimensionMismatch(u.len(), v.len()));
    }
    if let Some(&bad) = u.iter().chain(v).find(|x| !x.is_finite() || **x < 0.0) {
        return Err(AnalyticsError::InvalidEntry(bad));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|a| a * a).sum();
    let nv: f64 = v.iter().map(|b| b * b).sum();
    if nu == 0.0 || nv == 0.0 {
        return Ok(None);
    }
    Ok(Some((dot / (nu * nv).sqrt()).clamp(0.0, 1.0)))
}

/// Cosine of two binary membership vectors given as sorted id sets.
fn binary_cosine(a: &[&str], b: &[&str]) -> Option<f64> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let norm = (a.len() as f64 * b.len() as f64).sqrt();
    Some((common as f64 / norm).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityLevel {
    Topic,
    Paper,
}

impl SimilarityLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityLevel::Topic => "topic",
            SimilarityLevel::Paper => "paper",
        }
    }
}

impl fmt::Display for SimilarityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimilarityLevel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "topic" => Ok(SimilarityLevel::Topic),
            "paper" => Ok(SimilarityLevel::Paper),
            other => Err(format!("unknown similarity level {other:?} (expected topic or paper)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdgSimilarity {
    pub sdg: Sdg,
    /// `values[a][b]`, indexed like [`SimilarityReport::systems`].
    pub values: Vec<Vec<Option<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    pub level: SimilarityLevel,
    pub systems: Vec<String>,
    pub per_sdg: Vec<SdgSimilarity>,
}

impl SimilarityReport {
    pub fn get(&self, sdg: Sdg, a: &str, b: &str) -> Option<f64> {
        let ia = self.systems.iter().position(|s| s == a)?;
        let ib = self.systems.iter().position(|s| s == b)?;
        self.per_sdg[sdg.index()].values[ia][ib]
    }

    /// `sdg,system_a,system_b,cosine`, full matrix per SDG, `NA` when absent.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["sdg", "system_a", "system_b", "cosine"])?;
        for m in &self.per_sdg {
            for (a, row) in self.systems.iter().zip(&m.values) {
                for (b, v) in self.systems.iter().zip(row) {
                    w.write_record([m.sdg.to_string().as_str(), a, b, &format_value(*v)])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn pairwise_similarity(labels: &LabelMatrix, corpus: &Corpus, level: SimilarityLevel) -> SimilarityReport {
    let systems = labels.systems().to_vec();
    let n = systems.len();
    let per_sdg = match level {
        SimilarityLevel::Topic => {
            let ltm = label_topic_matrix(labels, corpus);
            Sdg::all()
                .map(|sdg| {
                    let vecs: Vec<Vec<f64>> = systems.iter().map(|s| ltm.dense(s, sdg)).collect();
                    let values = matrix(n, |a, b| {
                        cosine(&vecs[a], &vecs[b]).expect("count vectors share the topic axis")
                    });
                    SdgSimilarity { sdg, values }
                })
                .collect()
        }
        SimilarityLevel::Paper => {
            let cells = labels.cell_docs();
            let empty = Vec::new();
            Sdg::all()
                .map(|sdg| {
                    let sets: Vec<&Vec<&str>> = systems
                        .iter()
                        .map(|s| cells.get(&(s.as_str(), sdg)).unwrap_or(&empty))
                        .collect();
                    let values = matrix(n, |a, b| binary_cosine(sets[a], sets[b]));
                    SdgSimilarity { sdg, values }
                })
                .collect()
        }
    };
    SimilarityReport {
        level,
        systems,
        per_sdg,
    }
}

/// Symmetric matrix from the upper triangle; a defined diagonal is exactly 1.
#[allow(clippy::needless_range_loop)]
fn matrix(n: usize, f: impl Fn(usize, usize) -> Option<f64>) -> Vec<Vec<Option<f64>>> {
    let mut m = vec![vec![None; n]; n];
    for a in 0..n {
        m[a][a] = f(a, a).map(|_| 1.0);
        for b in a + 1..n {
            let v = f(a, b);
            m[a][b] = v;
            m[b][a] = v;
        }
    }
    m
}

/// Relative frequencies of one (system, SDG) over meso topics.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicDistribution {
    pub system: String,
    pub sdg: Sdg,
    pub p: BTreeMap<String, f64>,
    pub support_docs: u64,
}

impl TopicDistribution {
    pub fn from_counts(system: &str, sdg: Sdg, counts: &BTreeMap<String, u64>) -> Self {
        let support: u64 = counts.values().sum();
        let p = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| (t.clone(), c as f64 / support as f64))
            .collect();
        TopicDistribution {
            system: system.to_string(),
            sdg,
            p,
            support_docs: support,
        }
    }
}

/// Symmetric similarity between meso topics, unit diagonal. Identity by default.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicSimilarity {
    keys: Vec<String>,
    index: HashMap<String, usize>,
    /// Row-major `n × n`; `None` is the identity.
    values: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
struct SimilarityRow {
    meso_i: String,
    meso_j: String,
    s: f64,
}

impl TopicSimilarity {
    pub fn identity<I, S>(keys: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let keys: Vec<String> = keys
            .into_iter()
            .map(Into::into)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        TopicSimilarity {
            keys,
            index,
            values: None,
        }
    }

    /// Builds a matrix from listed pairs: symmetric closure, missing pairs 0,
    /// diagonal forced to 1. Values must lie in [0, 1] and agree with their mirror.
    pub fn from_pairs<I, S>(keys: I, pairs: &[(String, String, f64)]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut sim = Self::identity(keys);
        let n = sim.keys.len();
        let mut values = vec![0.0; n * n];
        let mut set = vec![false; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
        }
        for (a, b, s) in pairs {
            let ia = sim.position(a)?;
            let ib = sim.position(b)?;
            if !(0.0..=1.0).contains(s) {
                return Err(AnalyticsError::Similarity(format!("s({a},{b}) = {s} outside [0, 1]")));
            }
            if ia == ib {
                continue;
            }
            for idx in [ia * n + ib, ib * n + ia] {
                if set[idx] && values[idx] != *s {
                    return Err(AnalyticsError::Similarity(format!(
                        "conflicting values for pair ({a},{b}): {} and {s}",
                        values[idx]
                    )));
                }
                values[idx] = *s;
                set[idx] = true;
            }
        }
        sim.values = Some(values);
        Ok(sim)
    }

    /// Reads `meso_i,meso_j,s` rows.
    pub fn from_reader<R: Read, I, S>(keys: I, reader: R) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut rdr = csv::Reader::from_reader(reader);
        let pairs: Vec<(String, String, f64)> = rdr
            .deserialize::<SimilarityRow>()
            .map(|r| r.map(|r| (r.meso_i, r.meso_j, r.s)))
            .collect::<std::result::Result<_, _>>()?;
        Self::from_pairs(keys, &pairs)
    }

    pub fn load<I, S>(keys: I, path: &Path) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_reader(keys, File::open(path)?)
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    fn position(&self, key: &str) -> Result<usize> {
        self.index
            .get(key)
            .copied()
            .ok_or_else(|| AnalyticsError::UnknownTopic(key.to_string()))
    }

    pub fn get(&self, a: &str, b: &str) -> Result<f64> {
        let (ia, ib) = (self.position(a)?, self.position(b)?);
        Ok(match &self.values {
            None => f64::from(u8::from(ia == ib)),
            Some(v) => v[ia * self.keys.len() + ib],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diversity {
    /// `1 / Σ_i Σ_j s_ij p_i p_j`.
    pub d: f64,
    /// `-Σ p_i ln p_i`.
    pub shannon: f64,
}

/// Order-2 similarity-sensitive true diversity of a topic distribution, with
/// Shannon entropy alongside. With the identity similarity `d` is the
/// inverse Simpson index.
pub fn diversity(p: &TopicDistribution, s: &TopicSimilarity) -> Result<Diversity> {
    let mut support: Vec<(usize, f64)> = Vec::with_capacity(p.p.len());
    let mut total = 0.0;
    for (key, &pi) in &p.p {
        if !pi.is_finite() || pi < 0.0 {
            return Err(AnalyticsError::InvalidEntry(pi));
        }
        let idx = s.position(key)?;
        total += pi;
        if pi > 0.0 {
            support.push((idx, pi));
        }
    }
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(AnalyticsError::Unnormalized(total));
    }
    let n = s.keys.len();
    let mut quad = 0.0;
    for &(i, pi) in &support {
        for &(j, pj) in &support {
            let sij = match &s.values {
                None => f64::from(u8::from(i == j)),
                Some(v) => v[i * n + j],
            };
            quad += sij * pi * pj;
        }
    }
    let shannon = -support.iter().map(|&(_, pi)| pi * pi.ln()).sum::<f64>();
    Ok(Diversity {
        d: 1.0 / quad,
        shannon: shannon.max(0.0),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityRow {
    pub system: String,
    pub sdg: Sdg,
    pub value: Option<Diversity>,
    pub support_docs: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    pub rows: Vec<DiversityRow>,
}

impl DiversityReport {
    pub fn get(&self, system: &str, sdg: Sdg) -> Option<&DiversityRow> {
        self.rows.iter().find(|r| r.system == system && r.sdg == sdg)
    }

    /// `system,sdg,D,shannon,support_docs`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["system", "sdg", "D", "shannon", "support_docs"])?;
        for r in &self.rows {
            w.write_record([
                r.system.as_str(),
                &r.sdg.to_string(),
                &format_value(r.value.map(|v| v.d)),
                &format_value(r.value.map(|v| v.shannon)),
                &r.support_docs.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Diversity for every (system, SDG); empty cells are `None`.
pub fn diversity_report(matrix: &LabelTopicMatrix, s: &TopicSimilarity) -> Result<DiversityReport> {
    let mut rows = Vec::new();
    for system in &matrix.systems {
        for sdg in Sdg::all() {
            let dist = matrix.distribution(system, sdg);
            let value = if dist.support_docs == 0 {
                None
            } else {
                Some(diversity(&dist, s)?)
            };
            rows.push(DiversityRow {
                system: system.clone(),
                sdg,
                value,
                support_docs: dist.support_docs,
            });
        }
    }
    Ok(DiversityReport { rows })
}
