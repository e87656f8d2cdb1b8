//! Helpers shared by the integration tests, including a brute-force query
//! evaluator that scans token lists directly instead of using postings or
//! the engine's prefilter.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use sdglens_core::corpus::{Corpus, Document, Field, TokenStream};
use sdglens_core::query::{read_systems, Query, Scope, SystemDef};
use sdglens_core::sdg::Sdg;
use sdglens_core::synth;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn doc(id: &str, title: &str, abstract_text: &str, keywords: &[&str]) -> Document {
    Document {
        id: id.into(),
        title: title.into(),
        abstract_text: abstract_text.into(),
        keywords: keywords.iter().map(|k| k.to_string()).collect(),
        year: 2019,
        topic_micro: None,
        topic: None,
    }
}

pub fn fixture_corpus() -> Corpus {
    Corpus::from_documents(synth::fixture_corpus()).unwrap()
}

pub fn fixture_systems() -> Vec<SystemDef> {
    read_systems(synth::fixture_systems_csv().as_bytes()).unwrap()
}

/// Documents' token streams, scanned linearly.
pub struct Naive {
    streams: [TokenStream; 3],
}

impl Naive {
    pub fn new(doc: &Document) -> Self {
        Naive {
            streams: doc.token_streams(),
        }
    }

    fn stream(&self, f: Field) -> &TokenStream {
        self.streams.iter().find(|s| s.field == f).unwrap()
    }

    fn token_at(&self, f: Field, pos: u32) -> Option<&str> {
        self.stream(f)
            .tokens
            .iter()
            .find(|t| t.position == pos)
            .map(|t| t.text.as_str())
    }

    /// Start positions where `leaf` occurs in field `f`.
    fn starts(&self, leaf: &Query, f: Field) -> Vec<u32> {
        let mut out = Vec::new();
        for t in &self.stream(f).tokens {
            let ok = match leaf {
                Query::Term { text, wildcard: false } => t.text == *text,
                Query::Term { text, wildcard: true } => t.text.starts_with(text.as_str()),
                Query::Phrase(tokens) => tokens
                    .iter()
                    .enumerate()
                    .all(|(k, tok)| self.token_at(f, t.position + k as u32) == Some(tok.as_str())),
                _ => unreachable!("proximity operands are leaves"),
            };
            if ok {
                out.push(t.position);
            }
        }
        out
    }

    pub fn eval(&self, q: &Query) -> bool {
        self.eval_in(q, &Field::ALL)
    }

    fn eval_in(&self, q: &Query, fields: &[Field]) -> bool {
        match q {
            Query::Term { .. } | Query::Phrase(_) => fields.iter().any(|&f| !self.starts(q, f).is_empty()),
            Query::Near {
                left,
                right,
                window,
                ordered,
            } => fields.iter().any(|&f| {
                let ls = self.starts(left, f);
                let rs = self.starts(right, f);
                ls.iter().any(|&l| {
                    rs.iter().any(|&r| {
                        let (l, r, w) = (l as i64, r as i64, *window as i64);
                        if *ordered {
                            r > l && r - l <= w
                        } else {
                            l != r && (r - l).abs() <= w
                        }
                    })
                })
            }),
            Query::And(cs) => cs.iter().all(|c| self.eval_in(c, fields)),
            Query::Or(cs) => cs.iter().any(|c| self.eval_in(c, fields)),
            Query::Not(c) => !self.eval_in(c, fields),
            Query::Scoped { scope, child } => {
                let narrowed: Vec<Field> = match scope {
                    Scope::Any => fields.to_vec(),
                    Scope::Only(f) => fields.iter().copied().filter(|x| x == f).collect(),
                };
                self.eval_in(child, &narrowed)
            }
        }
    }
}

/// Every query on every document; the `(doc, system, sdg)` label set.
pub fn naive_labels(corpus: &Corpus, systems: &[SystemDef]) -> BTreeSet<(String, String, Sdg)> {
    let mut out = BTreeSet::new();
    for d in corpus.docs() {
        let naive = Naive::new(d);
        for s in systems {
            for e in &s.entries {
                if naive.eval(&e.query) {
                    out.insert((d.id.clone(), s.name.clone(), e.sdg));
                }
            }
        }
    }
    out
}

pub fn label_set(lm: &sdglens_core::LabelMatrix) -> BTreeSet<(String, String, Sdg)> {
    lm.keys().map(|k| (k.doc_id.clone(), k.system.clone(), k.sdg)).collect()
}

/// Dense cosine written out independently of the analytics module.
pub fn dense_cosine(u: &[f64], v: &[f64]) -> Option<f64> {
    let mut dot = 0.0;
    let mut uu = 0.0;
    let mut vv = 0.0;
    for i in 0..u.len() {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if uu == 0.0 || vv == 0.0 {
        None
    } else {
        Some(dot / (uu.sqrt() * vv.sqrt()))
    }
}
