use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use sdglens_core::analytics::SimilarityLevel;
use sdglens_core::CorpusFormat;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    corpus: RawCorpus,
    topics: Option<RawTopics>,
    systems: RawSystems,
    output: RawOutput,
    #[serde(default)]
    params: Params,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    path: PathBuf,
    format: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTopics {
    taxonomy: PathBuf,
    assignments: Option<PathBuf>,
    similarity: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystems {
    path: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: PathBuf,
}

/// `[params]`; command-line flags take precedence.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub workers: Option<usize>,
    pub min_weight: Option<u64>,
    pub top_k: Option<usize>,
    pub level: Option<String>,
    pub clamp: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TopicPaths {
    pub taxonomy: PathBuf,
    /// Falls back to the corpus's own `topic_micro` column when absent.
    pub assignments: Option<PathBuf>,
    /// Identity similarity when absent.
    pub similarity: Option<PathBuf>,
}

/// A loaded config with paths resolved against the config file's directory.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub corpus_format: CorpusFormat,
    pub topics: Option<TopicPaths>,
    pub systems: PathBuf,
    pub output_dir: PathBuf,
    pub params: Params,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        let corpus = resolve(&raw.corpus.path);
        let corpus_format = match &raw.corpus.format {
            Some(f) => f.parse::<CorpusFormat>().map_err(|e| CliError::Config(e.to_string()))?,
            None => match corpus.extension().and_then(|e| e.to_str()) {
                Some("csv") => CorpusFormat::Csv,
                _ => CorpusFormat::Jsonl,
            },
        };
        if let Some(level) = &raw.params.level {
            level
                .parse::<SimilarityLevel>()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(RunConfig {
            corpus,
            corpus_format,
            topics: raw.topics.map(|t| TopicPaths {
                taxonomy: resolve(&t.taxonomy),
                assignments: t.assignments.as_deref().map(resolve),
                similarity: t.similarity.as_deref().map(resolve),
            }),
            systems: resolve(&raw.systems.path),
            output_dir: resolve(&raw.output.dir),
            params: raw.params,
        })
    }

    /// Every referenced input exists and the output directory can be created.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut inputs = vec![("corpus", &self.corpus), ("systems", &self.systems)];
        if let Some(t) = &self.topics {
            inputs.push(("taxonomy", &t.taxonomy));
            inputs.extend(t.assignments.iter().map(|p| ("assignments", p)));
            inputs.extend(t.similarity.iter().map(|p| ("topic similarity", p)));
        }
        for (what, p) in inputs {
            if !p.is_file() {
                return Err(CliError::Config(format!("{what} file not found: {}", p.display())));
            }
        }
        fs::create_dir_all(&self.output_dir).map_err(|e| {
            CliError::Config(format!(
                "cannot create output directory {}: {e}",
                self.output_dir.display()
            ))
        })
    }

    pub fn output(&self, name: &str) -> PathBuf {
        self.output_dir.join(name)
    }

    pub fn require_topics(&self) -> Result<&TopicPaths, CliError> {
        self.topics
            .as_ref()
            .ok_or_else(|| CliError::Config("this report needs a [topics] section".into()))
    }
}
