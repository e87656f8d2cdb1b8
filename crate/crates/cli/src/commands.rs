use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use sdglens_core::analytics::{
    coverage, diversity_report, label_topic_matrix, pairwise_similarity, SimilarityLevel, TopicSimilarity,
};
use sdglens_core::cooccur::{build_network, export_network, NetworkFormat, DEFAULT_MIN_EDGE_WEIGHT};
use sdglens_core::corpus::{load_assignments, AttachReport};
use sdglens_core::query::read_systems;
use sdglens_core::{label_corpus, Corpus, Engine, LabelMatrix, Sdg, SystemDef, TopicTaxonomy};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::heatmap;

pub const LABELS_FILE: &str = "labels.csv";
pub const TRACES_FILE: &str = "traces.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const DEFAULT_TOP_K: usize = 10;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemSummary {
    pub name: String,
    pub queries: usize,
}

/// Timing and environment of the labeling run; the only part of the
/// manifest that changes between identical runs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunInfo {
    pub timestamp_unix: u64,
    pub workers: usize,
    pub timings_ms: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub n_docs: usize,
    pub skipped_rows: usize,
    pub topics_assigned: usize,
    pub topic_warnings: usize,
    pub systems: Vec<SystemSummary>,
    pub n_labels: usize,
    /// Files in the output directory written by this run and later reports.
    pub outputs: BTreeSet<String>,
    pub run: RunInfo,
}

impl Manifest {
    fn load(cfg: &RunConfig) -> Result<Self, CliError> {
        let path = cfg.output(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|_| {
            CliError::Config(format!(
                "no label run found ({} missing); run `sdglens label` first",
                path.display()
            ))
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }

    fn save(&self, cfg: &RunConfig) -> Result<(), CliError> {
        let mut body = serde_json::to_string_pretty(self).expect("manifest serializes");
        body.push('\n');
        write(cfg, MANIFEST_FILE, body.into_bytes())
    }
}

fn write(cfg: &RunConfig, name: &str, body: Vec<u8>) -> Result<(), CliError> {
    let path = cfg.output(name);
    fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn csv_bytes<E: std::fmt::Display>(f: impl FnOnce(&mut Vec<u8>) -> Result<(), E>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(CliError::data)?;
    Ok(buf)
}

fn ms(since: Instant) -> u64 {
    since.elapsed().as_millis() as u64
}

/// Corpus with topics attached when the config names a taxonomy.
struct Inputs {
    corpus: Corpus,
    taxonomy: Option<TopicTaxonomy>,
    attach: AttachReport,
}

fn load_inputs(cfg: &RunConfig) -> Result<Inputs, CliError> {
    cfg.validate()?;
    let mut corpus = Corpus::load(&cfg.corpus, cfg.corpus_format).map_err(CliError::data)?;
    let mut attach = AttachReport::default();
    let taxonomy = match &cfg.topics {
        None => None,
        Some(t) => {
            let tax = TopicTaxonomy::load(&t.taxonomy).map_err(CliError::data)?;
            let assignments = match &t.assignments {
                Some(p) => load_assignments(p).map_err(CliError::data)?,
                None => corpus.embedded_assignments(),
            };
            attach = corpus.attach_topics(&tax, &assignments);
            for w in &attach.warnings {
                eprintln!("warning: {w}");
            }
            Some(tax)
        }
    };
    Ok(Inputs {
        corpus,
        taxonomy,
        attach,
    })
}

fn load_systems(path: &Path) -> Result<Vec<SystemDef>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if text.trim().is_empty() {
        return Err(CliError::Config(format!("systems file {} is empty", path.display())));
    }
    let systems = read_systems(text.as_bytes()).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if systems.is_empty() {
        return Err(CliError::Config(format!(
            "systems file {} defines no queries",
            path.display()
        )));
    }
    Ok(systems)
}

pub fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let inputs = load_inputs(cfg)?;
    let systems = load_systems(&cfg.systems)?;
    Engine::build(&systems).map_err(CliError::data)?;
    println!(
        "corpus: {} documents, {} rows skipped",
        inputs.corpus.len(),
        inputs.corpus.skipped_rows()
    );
    if inputs.taxonomy.is_some() {
        println!(
            "topics: {} documents assigned, {} warnings",
            inputs.attach.assigned,
            inputs.attach.warnings.len()
        );
    }
    for s in &systems {
        println!("system {}: {} queries", s.name, s.entries.len());
    }
    if let Some(p) = cfg.topics.as_ref().and_then(|t| t.similarity.as_ref()) {
        let tax = inputs.taxonomy.as_ref().expect("taxonomy loads with [topics]");
        TopicSimilarity::load(tax.meso_ids(), p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
    }
    println!("ok");
    Ok(())
}

pub fn label(cfg: &RunConfig, workers: Option<usize>) -> Result<(), CliError> {
    let workers = workers
        .or(cfg.params.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let inputs = load_inputs(cfg)?;
    let systems = load_systems(&cfg.systems)?;
    timings.insert("load".to_string(), ms(t));

    let t = Instant::now();
    let engine = Engine::build(&systems).map_err(CliError::data)?;
    timings.insert("build_engine".to_string(), ms(t));

    let t = Instant::now();
    let labels = label_corpus(&engine, &inputs.corpus, workers).map_err(CliError::data)?;
    timings.insert("label".to_string(), ms(t));

    let label_dump = csv_bytes(|b| labels.write_labels(b))?;
    let trace_dump = csv_bytes(|b| labels.write_traces(b))?;
    write(cfg, LABELS_FILE, label_dump)?;
    write(cfg, TRACES_FILE, trace_dump)?;

    let manifest = Manifest {
        n_docs: inputs.corpus.len(),
        skipped_rows: inputs.corpus.skipped_rows(),
        topics_assigned: inputs.attach.assigned,
        topic_warnings: inputs.attach.warnings.len(),
        systems: systems
            .iter()
            .map(|s| SystemSummary {
                name: s.name.clone(),
                queries: s.entries.len(),
            })
            .collect(),
        n_labels: labels.len(),
        outputs: [LABELS_FILE, TRACES_FILE].map(String::from).into(),
        run: RunInfo {
            timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            workers,
            timings_ms: timings,
        },
    };
    manifest.save(cfg)
}

/// Inputs plus the label matrix read back from a previous `label` run.
struct Labeled {
    inputs: Inputs,
    labels: LabelMatrix,
    manifest: Manifest,
}

fn load_labeled(cfg: &RunConfig) -> Result<Labeled, CliError> {
    let inputs = load_inputs(cfg)?;
    let manifest = Manifest::load(cfg)?;
    if manifest.n_docs != inputs.corpus.len() {
        return Err(CliError::Data(format!(
            "corpus has {} documents but the label run saw {}; rerun `sdglens label`",
            inputs.corpus.len(),
            manifest.n_docs
        )));
    }
    let open = |name: &str| {
        let path = cfg.output(name);
        fs::File::open(&path)
            .map_err(|_| CliError::Config(format!("{} missing; run `sdglens label` first", path.display())))
    };
    let labels = LabelMatrix::read_dumps(
        open(LABELS_FILE)?,
        open(TRACES_FILE)?,
        manifest.n_docs,
        manifest.systems.iter().map(|s| s.name.clone()).collect(),
    )
    .map_err(CliError::data)?;
    Ok(Labeled {
        inputs,
        labels,
        manifest,
    })
}

/// Writes report files and records them in the manifest.
fn finish(cfg: &RunConfig, mut manifest: Manifest, files: Vec<(String, Vec<u8>)>) -> Result<(), CliError> {
    for (name, body) in files {
        write(cfg, &name, body)?;
        manifest.outputs.insert(name);
    }
    manifest.save(cfg)
}

pub fn report_coverage(cfg: &RunConfig) -> Result<(), CliError> {
    let l = load_labeled(cfg)?;
    let rep = coverage(&l.labels, &l.inputs.corpus);
    let body = csv_bytes(|b| rep.write_csv(b))?;
    finish(cfg, l.manifest, vec![("coverage.csv".into(), body)])
}

pub fn report_similarity(cfg: &RunConfig, level: Option<SimilarityLevel>, clamp: Option<f64>) -> Result<(), CliError> {
    let level = match level {
        Some(l) => l,
        None => match &cfg.params.level {
            Some(s) => s.parse().map_err(CliError::Config)?,
            None => SimilarityLevel::Paper,
        },
    };
    let clamp = clamp.or(cfg.params.clamp).unwrap_or(match level {
        SimilarityLevel::Paper => 0.5,
        SimilarityLevel::Topic => 1.0,
    });
    if !(clamp.is_finite() && clamp > 0.0) {
        return Err(CliError::Config(format!("clamp must be positive, got {clamp}")));
    }
    if level == SimilarityLevel::Topic {
        cfg.require_topics()?;
    }
    let l = load_labeled(cfg)?;
    let rep = pairwise_similarity(&l.labels, &l.inputs.corpus, level);
    let body = csv_bytes(|b| rep.write_csv(b))?;
    let svg = heatmap::render(&rep, clamp);
    finish(
        cfg,
        l.manifest,
        vec![
            (format!("similarity_{level}.csv"), body),
            (format!("similarity_{level}.svg"), svg.into_bytes()),
        ],
    )
}

pub fn report_diversity(cfg: &RunConfig) -> Result<(), CliError> {
    let topics = cfg.require_topics()?.clone();
    let l = load_labeled(cfg)?;
    let tax = l.inputs.taxonomy.as_ref().expect("taxonomy loads with [topics]");
    let sim = match &topics.similarity {
        Some(p) => {
            TopicSimilarity::load(tax.meso_ids(), p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?
        }
        None => TopicSimilarity::identity(tax.meso_ids()),
    };
    let ltm = label_topic_matrix(&l.labels, &l.inputs.corpus);
    let rep = diversity_report(&ltm, &sim).map_err(CliError::data)?;
    let body = csv_bytes(|b| rep.write_csv(b))?;
    finish(cfg, l.manifest, vec![("diversity.csv".into(), body)])
}

pub fn report_topics(cfg: &RunConfig, top_k: Option<usize>) -> Result<(), CliError> {
    cfg.require_topics()?;
    let k = top_k.or(cfg.params.top_k).unwrap_or(DEFAULT_TOP_K);
    if k == 0 {
        return Err(CliError::Config("top-k must be at least 1".into()));
    }
    let l = load_labeled(cfg)?;
    let ltm = label_topic_matrix(&l.labels, &l.inputs.corpus);
    let top = csv_bytes(|b| ltm.write_top_topics_csv(b, k, l.inputs.taxonomy.as_ref()))?;
    let dist = csv_bytes(|b| ltm.write_distribution_csv(b))?;
    finish(
        cfg,
        l.manifest,
        vec![("topics.csv".into(), top), ("topic_distribution.csv".into(), dist)],
    )
}

pub struct CooccurArgs {
    pub system: String,
    pub sdg: Sdg,
    pub min_weight: Option<u64>,
    pub topics: Vec<String>,
    pub formats: Vec<NetworkFormat>,
}

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

pub fn report_cooccur(cfg: &RunConfig, args: CooccurArgs) -> Result<(), CliError> {
    let min_weight = args
        .min_weight
        .or(cfg.params.min_weight)
        .unwrap_or(DEFAULT_MIN_EDGE_WEIGHT);
    let filter: Option<BTreeSet<String>> = (!args.topics.is_empty()).then(|| args.topics.iter().cloned().collect());
    if filter.is_some() {
        cfg.require_topics()?;
    }
    let l = load_labeled(cfg)?;
    if !l.labels.systems().contains(&args.system) {
        return Err(CliError::Config(format!(
            "unknown system {:?}; the label run has {}",
            args.system,
            l.labels.systems().join(", ")
        )));
    }
    let net = build_network(
        &l.labels,
        &l.inputs.corpus,
        &args.system,
        args.sdg,
        min_weight,
        filter.as_ref(),
    )
    .map_err(CliError::data)?;
    if net.is_empty() {
        return Err(CliError::Data(format!(
            "no edge of system {} SDG {} reaches weight {min_weight}",
            args.system, args.sdg
        )));
    }
    let mut stem = format!("cooccur_{}_sdg{}", file_safe(&args.system), args.sdg);
    if let Some(f) = &filter {
        stem.push('_');
        stem.push_str(&file_safe(&f.iter().cloned().collect::<Vec<_>>().join("+")));
    }
    let mut manifest = l.manifest;
    for format in &args.formats {
        for p in export_network(&net, *format, &cfg.output(&stem)).map_err(CliError::data)? {
            println!("wrote {}", p.display());
            manifest.outputs.insert(
                p.file_name()
                    .expect("export paths have names")
                    .to_string_lossy()
                    .into_owned(),
            );
        }
    }
    println!("network: {} nodes, {} edges", net.nodes.len(), net.edges.len());
    manifest.save(cfg)
}
