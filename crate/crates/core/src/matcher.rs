//! Corpus labeling: every system's queries against every document.
//!
//! The engine keeps a dictionary from positive literal stems (exact and
//! trailing-wildcard entries) to the queries that contain them. A document's
//! distinct tokens are looked up in that dictionary and only the queries that
//! fired are evaluated. Validated queries cannot match a document that holds
//! none of their positive literals, so the prefilter never changes results.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::Deserialize;

use crate::corpus::{Corpus, Document, Field};
use crate::query::{Literal, Literals, Query, Scope, SystemDef};
use crate::sdg::Sdg;

#[derive(Debug, thiserror::Error)]
pub enum MatchError {
    #[error("no labeling systems given")]
    NoSystems,
    #[error("duplicate system name {0:?}")]
    DuplicateSystem(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("dump: {0}")]
    Csv(#[from] csv::Error),
    #[error("dump line {line}: {message}")]
    Dump { line: u64, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hit {
    pub field: Field,
    pub position: u32,
    pub literal: Literal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchTrace {
    pub doc_id: String,
    pub system: String,
    pub sdg: Sdg,
    pub query_id: String,
    pub hits: Vec<Hit>,
}

#[derive(Debug, Clone)]
pub struct CompiledQuery {
    pub system: usize,
    pub sdg: Sdg,
    pub query_id: String,
    pub query: Query,
    pub literals: Literals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    Prefiltered,
    Exhaustive,
}

#[derive(Debug)]
pub struct Engine {
    systems: Vec<String>,
    queries: Vec<CompiledQuery>,
    exact: HashMap<String, Vec<usize>>,
    prefix: HashMap<String, Vec<usize>>,
    /// Distinct byte lengths of wildcard stems, ascending.
    prefix_lens: Vec<usize>,
    /// Queries without positive literals; evaluated on every document.
    fallback: Vec<usize>,
}

impl Engine {
    pub fn build(systems: &[SystemDef]) -> Result<Self, MatchError> {
        if systems.is_empty() {
            return Err(MatchError::NoSystems);
        }
        let mut engine = Engine {
            systems: Vec::with_capacity(systems.len()),
            queries: Vec::new(),
            exact: HashMap::new(),
            prefix: HashMap::new(),
            prefix_lens: Vec::new(),
            fallback: Vec::new(),
        };
        for (si, sys) in systems.iter().enumerate() {
            sys.validate().map_err(MatchError::InvalidSystem)?;
            if engine.systems.contains(&sys.name) {
                return Err(MatchError::DuplicateSystem(sys.name.clone()));
            }
            engine.systems.push(sys.name.clone());
            for entry in &sys.entries {
                let qi = engine.queries.len();
                let literals = entry.query.literals();
                if literals.positive.is_empty() {
                    engine.fallback.push(qi);
                }
                for lit in &literals.positive {
                    let map = if lit.wildcard {
                        &mut engine.prefix
                    } else {
                        &mut engine.exact
                    };
                    map.entry(lit.stem.clone()).or_default().push(qi);
                }
                engine.queries.push(CompiledQuery {
                    system: si,
                    sdg: entry.sdg,
                    query_id: entry.query_id.clone(),
                    query: entry.query.clone(),
                    literals,
                });
            }
        }
        let lens: BTreeSet<usize> = engine.prefix.keys().map(String::len).collect();
        engine.prefix_lens = lens.into_iter().collect();
        Ok(engine)
    }

    pub fn systems(&self) -> &[String] {
        &self.systems
    }

    pub fn queries(&self) -> &[CompiledQuery] {
        &self.queries
    }

    /// Queries listing `literal` among their positive literals.
    pub fn candidates(&self, literal: &Literal) -> &[usize] {
        let map = if literal.wildcard { &self.prefix } else { &self.exact };
        map.get(&literal.stem).map_or(&[], Vec::as_slice)
    }

    /// Every dictionary entry, sorted by literal.
    pub fn dictionary(&self) -> Vec<(Literal, &[usize])> {
        let mut out: Vec<_> = self
            .exact
            .iter()
            .map(|(s, q)| (Literal::exact(s.clone()), q.as_slice()))
            .chain(
                self.prefix
                    .iter()
                    .map(|(s, q)| (Literal::prefix(s.clone()), q.as_slice())),
            )
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn match_document(&self, doc: &Document) -> Vec<MatchTrace> {
        self.match_document_with(doc, Evaluation::Prefiltered)
    }

    pub fn match_document_with(&self, doc: &Document, mode: Evaluation) -> Vec<MatchTrace> {
        let streams = doc.token_streams();
        let index = DocIndex::new(&streams);
        let candidates: Vec<usize> = match mode {
            Evaluation::Exhaustive => (0..self.queries.len()).collect(),
            Evaluation::Prefiltered => self.prefilter(&index),
        };
        let mut out = Vec::new();
        let mut hits = Vec::new();
        for qi in candidates {
            let q = &self.queries[qi];
            hits.clear();
            if index.eval(&q.query, FieldMask::ALL, &mut hits) {
                hits.sort();
                hits.dedup();
                out.push(MatchTrace {
                    doc_id: doc.id.clone(),
                    system: self.systems[q.system].clone(),
                    sdg: q.sdg,
                    query_id: q.query_id.clone(),
                    hits: hits.clone(),
                });
            }
        }
        out
    }

    fn prefilter(&self, index: &DocIndex<'_>) -> Vec<usize> {
        let mut fired = vec![false; self.queries.len()];
        let mut mark = |qs: &[usize]| qs.iter().for_each(|&q| fired[q] = true);
        for token in index.distinct_tokens() {
            if let Some(qs) = self.exact.get(token) {
                mark(qs);
            }
            for &len in &self.prefix_lens {
                if len > token.len() {
                    break;
                }
                if !token.is_char_boundary(len) {
                    continue;
                }
                if let Some(qs) = self.prefix.get(&token[..len]) {
                    mark(qs);
                }
            }
        }
        mark(&self.fallback);
        fired.iter().enumerate().filter_map(|(i, &f)| f.then_some(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct FieldMask(u8);

impl FieldMask {
    const ALL: FieldMask = FieldMask(0b111);

    fn restrict(self, scope: Scope) -> FieldMask {
        match scope {
            Scope::Any => self,
            Scope::Only(f) => FieldMask(self.0 & (1 << f.index())),
        }
    }

    fn fields(self) -> impl Iterator<Item = Field> {
        Field::ALL.into_iter().filter(move |f| self.0 & (1 << f.index()) != 0)
    }
}

/// Per-field postings for one document.
struct DocIndex<'a> {
    fields: [HashMap<&'a str, Vec<u32>>; 3],
}

impl<'a> DocIndex<'a> {
    fn new(streams: &'a [crate::corpus::TokenStream; 3]) -> Self {
        let mut fields: [HashMap<&'a str, Vec<u32>>; 3] = Default::default();
        for stream in streams {
            let map = &mut fields[stream.field.index()];
            for t in &stream.tokens {
                map.entry(t.text.as_str()).or_default().push(t.position);
            }
        }
        DocIndex { fields }
    }

    fn distinct_tokens(&self) -> BTreeSet<&'a str> {
        self.fields.iter().flat_map(|m| m.keys().copied()).collect()
    }

    fn positions(&self, field: Field, token: &str) -> &[u32] {
        self.fields[field.index()].get(token).map_or(&[], Vec::as_slice)
    }

    fn has(&self, field: Field, token: &str, position: u32) -> bool {
        self.positions(field, token).binary_search(&position).is_ok()
    }

    /// Start positions of `leaf` in one field, sorted, each with the hits it covers.
    fn occurrences(&self, leaf: &Query, field: Field) -> Vec<(u32, Vec<Hit>)> {
        match leaf {
            Query::Term { text, wildcard: false } => self
                .positions(field, text)
                .iter()
                .map(|&p| {
                    (
                        p,
                        vec![Hit {
                            field,
                            position: p,
                            literal: Literal::exact(text.clone()),
                        }],
                    )
                })
                .collect(),
            Query::Term { text, wildcard: true } => {
                let lit = Literal::prefix(text.clone());
                let mut out: Vec<(u32, Vec<Hit>)> = self.fields[field.index()]
                    .iter()
                    .filter(|(tok, _)| lit.matches(tok))
                    .flat_map(|(_, ps)| ps.iter().copied())
                    .map(|p| {
                        (
                            p,
                            vec![Hit {
                                field,
                                position: p,
                                literal: lit.clone(),
                            }],
                        )
                    })
                    .collect();
                out.sort();
                out
            }
            Query::Phrase(tokens) => {
                let (first, rest) = tokens.split_first().expect("validated phrase is non-empty");
                self.positions(field, first)
                    .iter()
                    .copied()
                    .filter(|&start| rest.iter().zip(1u32..).all(|(t, off)| self.has(field, t, start + off)))
                    .map(|start| {
                        let hits = tokens
                            .iter()
                            .zip(0u32..)
                            .map(|(t, off)| Hit {
                                field,
                                position: start + off,
                                literal: Literal::exact(t.clone()),
                            })
                            .collect();
                        (start, hits)
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// Evaluates `q` restricted to `mask`. On success, evidence is appended to
    /// `hits`; on failure `hits` is left as it was.
    fn eval(&self, q: &Query, mask: FieldMask, hits: &mut Vec<Hit>) -> bool {
        match q {
            Query::Term { .. } | Query::Phrase(_) => {
                let mut found = false;
                for field in mask.fields() {
                    for (_, h) in self.occurrences(q, field) {
                        hits.extend(h);
                        found = true;
                    }
                }
                found
            }
            Query::Near {
                left,
                right,
                window,
                ordered,
            } => {
                let mut found = false;
                for field in mask.fields() {
                    let ls = self.occurrences(left, field);
                    if ls.is_empty() {
                        continue;
                    }
                    let rs = self.occurrences(right, field);
                    for (lp, lh) in &ls {
                        for (rp, rh) in &rs {
                            if within(*lp, *rp, *window, *ordered) {
                                hits.extend(lh.iter().cloned());
                                hits.extend(rh.iter().cloned());
                                found = true;
                            }
                        }
                    }
                }
                found
            }
            Query::And(children) => {
                let mark = hits.len();
                for c in children {
                    let ok = match c {
                        Query::Not(inner) => !self.eval(inner, mask, &mut Vec::new()),
                        other => self.eval(other, mask, hits),
                    };
                    if !ok {
                        hits.truncate(mark);
                        return false;
                    }
                }
                true
            }
            Query::Or(children) => {
                let mut any = false;
                for c in children {
                    any |= self.eval(c, mask, hits);
                }
                any
            }
            Query::Not(inner) => !self.eval(inner, mask, &mut Vec::new()),
            Query::Scoped { scope, child } => self.eval(child, mask.restrict(*scope), hits),
        }
    }
}

/// Distance between operand start positions. Unordered proximity needs two
/// distinct positions; ordered needs the right operand strictly after the left.
fn within(left: u32, right: u32, window: u32, ordered: bool) -> bool {
    if ordered {
        right > left && right - left <= window
    } else {
        left != right && left.abs_diff(right) <= window
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelKey {
    pub doc_id: String,
    pub system: String,
    pub sdg: Sdg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryMatch {
    pub query_id: String,
    pub hits: Vec<Hit>,
}

/// Sparse (document, system, SDG) assignments with the query matches behind each.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMatrix {
    n_docs: usize,
    systems: Vec<String>,
    cells: BTreeMap<LabelKey, Vec<QueryMatch>>,
}

#[derive(Debug, Deserialize)]
struct LabelRow {
    doc_id: String,
    system: String,
    sdg: Sdg,
    query_ids: String,
}

#[derive(Debug, Deserialize)]
struct TraceRow {
    doc_id: String,
    system: String,
    sdg: Sdg,
    query_id: String,
    stem: String,
    field: Field,
    position: u32,
}

impl LabelMatrix {
    pub fn new(n_docs: usize, systems: Vec<String>) -> Self {
        LabelMatrix {
            n_docs,
            systems,
            cells: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, trace: MatchTrace) {
        let key = LabelKey {
            doc_id: trace.doc_id,
            system: trace.system,
            sdg: trace.sdg,
        };
        let matches = self.cells.entry(key).or_default();
        let m = QueryMatch {
            query_id: trace.query_id,
            hits: trace.hits,
        };
        let at = matches.partition_point(|x| x.query_id < m.query_id);
        if matches.get(at).is_some_and(|x| x.query_id == m.query_id) {
            let existing = &mut matches[at].hits;
            existing.extend(m.hits);
            existing.sort();
            existing.dedup();
        } else {
            matches.insert(at, m);
        }
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn systems(&self) -> &[String] {
        &self.systems
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, doc_id: &str, system: &str, sdg: Sdg) -> bool {
        self.cells.contains_key(&LabelKey {
            doc_id: doc_id.into(),
            system: system.into(),
            sdg,
        })
    }

    pub fn labels(&self) -> impl Iterator<Item = (&LabelKey, &[QueryMatch])> {
        self.cells.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn keys(&self) -> impl Iterator<Item = &LabelKey> {
        self.cells.keys()
    }

    /// Labeled document ids for each (system, SDG), sorted.
    pub fn cell_docs(&self) -> BTreeMap<(&str, Sdg), Vec<&str>> {
        let mut out: BTreeMap<(&str, Sdg), Vec<&str>> = BTreeMap::new();
        for k in self.cells.keys() {
            out.entry((k.system.as_str(), k.sdg))
                .or_default()
                .push(k.doc_id.as_str());
        }
        out
    }

    pub fn docs_for(&self, system: &str, sdg: Sdg) -> Vec<&str> {
        self.cells
            .keys()
            .filter(|k| k.system == system && k.sdg == sdg)
            .map(|k| k.doc_id.as_str())
            .collect()
    }

    /// Distinct literal labels hit in one labeled cell.
    pub fn hit_labels(&self, doc_id: &str, system: &str, sdg: Sdg) -> BTreeSet<String> {
        let key = LabelKey {
            doc_id: doc_id.into(),
            system: system.into(),
            sdg,
        };
        self.cells
            .get(&key)
            .into_iter()
            .flatten()
            .flat_map(|m| m.hits.iter().map(|h| h.literal.label()))
            .collect()
    }

    /// `doc_id,system,sdg,query_ids` sorted by (doc_id, system, sdg); query ids `;`-joined.
    pub fn write_labels<W: Write>(&self, out: W) -> Result<(), MatchError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["doc_id", "system", "sdg", "query_ids"])?;
        for (k, matches) in &self.cells {
            let ids: Vec<&str> = matches.iter().map(|m| m.query_id.as_str()).collect();
            w.write_record([&k.doc_id, &k.system, &k.sdg.to_string(), &ids.join(";")])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    /// `doc_id,system,sdg,query_id,stem,field,position`, one row per hit.
    /// Wildcard literals are written as `stem*`.
    pub fn write_traces<W: Write>(&self, out: W) -> Result<(), MatchError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["doc_id", "system", "sdg", "query_id", "stem", "field", "position"])?;
        for (k, matches) in &self.cells {
            let sdg = k.sdg.to_string();
            for m in matches {
                for h in &m.hits {
                    w.write_record([
                        k.doc_id.as_str(),
                        &k.system,
                        &sdg,
                        &m.query_id,
                        &h.literal.label(),
                        h.field.as_str(),
                        &h.position.to_string(),
                    ])?;
                }
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    /// Rebuilds a matrix from the two dumps. `systems` and `n_docs` come from the
    /// run manifest, since systems with no labels leave no rows.
    pub fn read_dumps<L: Read, T: Read>(
        labels: L,
        traces: T,
        n_docs: usize,
        systems: Vec<String>,
    ) -> Result<Self, MatchError> {
        let mut lm = LabelMatrix::new(n_docs, systems);
        let mut rdr = csv::Reader::from_reader(labels);
        for (i, row) in rdr.deserialize::<LabelRow>().enumerate() {
            let row = row?;
            if !lm.systems.contains(&row.system) {
                return Err(MatchError::Dump {
                    line: i as u64 + 2,
                    message: format!("unknown system {:?}", row.system),
                });
            }
            let key = LabelKey {
                doc_id: row.doc_id,
                system: row.system,
                sdg: row.sdg,
            };
            let mut matches: Vec<QueryMatch> = row
                .query_ids
                .split(';')
                .filter(|s| !s.is_empty())
                .map(|q| QueryMatch {
                    query_id: q.to_string(),
                    hits: Vec::new(),
                })
                .collect();
            matches.sort_by(|a, b| a.query_id.cmp(&b.query_id));
            lm.cells.insert(key, matches);
        }
        let mut rdr = csv::Reader::from_reader(traces);
        for (i, row) in rdr.deserialize::<TraceRow>().enumerate() {
            let row = row?;
            let line = i as u64 + 2;
            let key = LabelKey {
                doc_id: row.doc_id,
                system: row.system,
                sdg: row.sdg,
            };
            let cell = lm.cells.get_mut(&key).ok_or_else(|| MatchError::Dump {
                line,
                message: format!("trace for unlabeled cell {key:?}"),
            })?;
            let m = cell
                .iter_mut()
                .find(|m| m.query_id == row.query_id)
                .ok_or_else(|| MatchError::Dump {
                    line,
                    message: format!("trace for unlisted query {:?}", row.query_id),
                })?;
            m.hits.push(Hit {
                field: row.field,
                position: row.position,
                literal: Literal::from_label(&row.stem),
            });
        }
        for matches in lm.cells.values_mut() {
            for m in matches {
                m.hits.sort();
                m.hits.dedup();
            }
        }
        Ok(lm)
    }
}

/// Labels the whole corpus with `workers` threads. Output does not depend on
/// the worker count or on document order.
pub fn label_corpus(engine: &Engine, corpus: &Corpus, workers: usize) -> Result<LabelMatrix, MatchError> {
    let docs = corpus.docs();
    let traces: Vec<MatchTrace> = if workers <= 1 {
        docs.iter().flat_map(|d| engine.match_document(d)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
        pool.install(|| {
            docs.par_iter()
                .with_min_len(64)
                .flat_map_iter(|d| engine.match_document(d))
                .collect()
        })
    };
    let mut lm = LabelMatrix::new(corpus.len(), engine.systems().to_vec());
    for t in traces {
        lm.insert(t);
    }
    Ok(lm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    fn doc(id: &str, title: &str, abstract_text: &str, keywords: &[&str]) -> Document {
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

    fn engine(queries: &[(u8, &str, &str)]) -> Engine {
        let mut sys = SystemDef::new("S1");
        for (sdg, id, src) in queries {
            sys = sys.with_query(*sdg, id, src).unwrap();
        }
        Engine::build(&[sys]).unwrap()
    }

    fn matches(src: &str, d: &Document) -> bool {
        !engine(&[(1, "q", src)]).match_document(d).is_empty()
    }

    #[test]
    fn dictionary_single_query() {
        let e = engine(&[(1, "q1", "poverty")]);
        let dict = e.dictionary();
        assert_eq!(dict.len(), 1);
        assert_eq!(dict[0].0, Literal::exact("poverty"));
        assert_eq!(dict[0].1, [0]);
        assert_eq!(e.queries()[0].query_id, "q1");
    }

    #[test]
    fn shared_stems_list_every_query() {
        let e = engine(&[(3, "q1", "health AND care"), (3, "q2", "health OR wellbeing")]);
        assert_eq!(e.candidates(&Literal::exact("health")), [0, 1]);
        assert_eq!(e.candidates(&Literal::exact("care")), [0]);
    }

    #[test]
    fn wildcard_hit_position() {
        let e = engine(&[(10, "q1", "migrat*")]);
        let t = e.match_document(&doc("a", "", "migration of cancer cells", &[]));
        assert_eq!(t.len(), 1);
        assert_eq!(
            t[0].hits,
            [Hit {
                field: Field::Abstract,
                position: 0,
                literal: Literal::prefix("migrat")
            }]
        );
    }

    #[test]
    fn phrase_order_matters() {
        assert!(!matches(
            "\"income inequality\"",
            &doc("a", "inequality income", "", &[])
        ));
        assert!(matches(
            "\"income inequality\"",
            &doc("a", "rising income inequality", "", &[])
        ));
    }

    #[test]
    fn ordered_proximity() {
        let d = doc("a", "", "reduce the income and wealth gap", &[]);
        let t = engine(&[(10, "q", "income W/3 gap")]).match_document(&d);
        assert_eq!(t.len(), 1);
        let pos: Vec<_> = t[0].hits.iter().map(|h| h.position).collect();
        assert_eq!(pos, [2, 5]);
        assert!(!matches("income W/2 gap", &d));
        assert!(!matches("gap W/3 income", &d));
        assert!(matches("gap NEAR/3 income", &d));
    }

    #[test]
    fn proximity_needs_two_occurrences() {
        let d = doc("a", "food", "", &[]);
        assert!(!matches("food NEAR/2 food", &d));
        assert!(matches("food NEAR/2 food", &doc("b", "food and food", "", &[])));
    }

    #[test]
    fn phrases_do_not_span_fields_or_keywords() {
        let d = doc("a", "clean", "water", &["clean", "water"]);
        assert!(!matches("\"clean water\"", &d));
        assert!(!matches("clean NEAR/5 water", &d));
        assert!(matches("clean AND water", &d));
    }

    #[test]
    fn field_scopes_restrict() {
        let d = doc("a", "poverty", "hunger", &[]);
        assert!(matches("title:poverty", &d));
        assert!(!matches("abstract:poverty", &d));
        assert!(matches("abstract:hunger AND title:poverty", &d));
        assert!(!matches("title:(abstract:hunger)", &d));
        assert!(matches("any:(hunger AND poverty)", &d));
    }

    #[test]
    fn negation_only_within_and() {
        let q = "health AND NOT animal";
        assert!(matches(q, &doc("a", "public health", "", &[])));
        assert!(!matches(q, &doc("a", "animal health", "", &[])));
        assert!(matches(
            "health AND NOT title:animal",
            &doc("a", "health", "animal", &[])
        ));
    }

    #[test]
    fn not_hits_are_not_recorded() {
        let e = engine(&[(3, "q", "health AND NOT (animal AND cattle)")]);
        let t = e.match_document(&doc("a", "animal health", "", &[]));
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].hits.len(), 1);
        assert_eq!(t[0].hits[0].literal, Literal::exact("health"));
    }

    #[test]
    fn two_queries_same_cell_collapse_to_one_label() {
        let e = engine(&[(1, "q1", "poverty"), (1, "q2", "\"extreme poverty\"")]);
        let corpus = Corpus::from_documents([doc("a", "extreme poverty", "", &[])]).unwrap();
        let lm = label_corpus(&e, &corpus, 1).unwrap();
        assert_eq!(lm.len(), 1);
        let (_, qm) = lm.labels().next().unwrap();
        let ids: Vec<_> = qm.iter().map(|m| m.query_id.as_str()).collect();
        assert_eq!(ids, ["q1", "q2"]);
    }

    #[test]
    fn empty_corpus_gives_empty_matrix() {
        let e = engine(&[(1, "q1", "poverty")]);
        let lm = label_corpus(&e, &Corpus::default(), 4).unwrap();
        assert!(lm.is_empty());
        assert_eq!(lm.n_docs(), 0);
    }

    #[test]
    fn build_rejects_empty_and_duplicates() {
        assert!(matches!(Engine::build(&[]), Err(MatchError::NoSystems)));
        let s = SystemDef::new("S").with_query(1, "q", "a").unwrap();
        assert!(matches!(
            Engine::build(&[s.clone(), s]),
            Err(MatchError::DuplicateSystem(_))
        ));
    }

    #[test]
    fn dumps_round_trip() {
        let e = engine(&[(1, "q1", "poverty OR migrat*"), (10, "q2", "income W/3 gap")]);
        let corpus = Corpus::from_documents([
            doc("a", "poverty and migration", "", &[]),
            doc("b", "", "reduce the income and wealth gap", &["poverty"]),
            doc("c", "nothing here", "", &[]),
        ])
        .unwrap();
        let lm = label_corpus(&e, &corpus, 1).unwrap();
        let (mut labels, mut traces) = (Vec::new(), Vec::new());
        lm.write_labels(&mut labels).unwrap();
        lm.write_traces(&mut traces).unwrap();
        let text = String::from_utf8(labels.clone()).unwrap();
        assert_eq!(text, "doc_id,system,sdg,query_ids\na,S1,1,q1\nb,S1,1,q1\nb,S1,10,q2\n");
        let back = LabelMatrix::read_dumps(&labels[..], &traces[..], 3, vec!["S1".into()]).unwrap();
        assert_eq!(back, lm);
    }

    #[test]
    fn parse_then_match_wildcard_unicode() {
        let q = parse_query("émigr*").unwrap();
        let sys = SystemDef {
            name: "S".into(),
            entries: vec![crate::query::QueryEntry {
                sdg: Sdg::new(10).unwrap(),
                query_id: "q".into(),
                query: q,
            }],
        };
        let e = Engine::build(&[sys]).unwrap();
        assert_eq!(e.match_document(&doc("a", "Émigrés", "", &[])).len(), 1);
    }
}
