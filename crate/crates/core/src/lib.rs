//! Keyword/boolean SDG labeling of bibliographic corpora and comparison of
//! labeling systems: coverage, topic- and paper-level cosine similarity,
//! similarity-aware topic diversity, top-topic tables and matched-keyword
//! co-occurrence networks.

pub mod analytics;
pub mod cooccur;
pub mod corpus;
pub mod matcher;
pub mod query;
pub mod sdg;
pub mod synth;

pub use corpus::{Corpus, CorpusFormat, Document, Field, TopicTaxonomy};
pub use matcher::{label_corpus, Engine, LabelMatrix, MatchTrace};
pub use query::{parse_query, Literal, Query, SystemDef};
pub use sdg::Sdg;
