//! Bibliographic records, the three-level topic taxonomy, and tokenization.
//!
//! A [`Corpus`] is immutable once loaded: labeling workers only ever borrow it.
//! Topic assignments are attached in a separate step so the same records can be
//! analysed with and without a topic lens.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// Number of unused positions left between consecutive author keywords, so that
/// phrase and proximity operators never bridge two keywords.
pub const KEYWORD_POSITION_GAP: u32 = 100;

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("malformed csv input: {0}")]
    Csv(#[from] csv::Error),
    #[error("taxonomy: {0}")]
    Taxonomy(String),
    #[error("unknown corpus format {0:?} (expected jsonl or csv)")]
    UnknownFormat(String),
}

pub type Result<T, E = CorpusError> = std::result::Result<T, E>;

/// Text field of a document. Order matters: it is the sort order of traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Title,
    Abstract,
    Keywords,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Title, Field::Abstract, Field::Keywords];

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Title => "title",
            Field::Abstract => "abstract",
            Field::Keywords => "keywords",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "title" => Ok(Field::Title),
            "abstract" => Ok(Field::Abstract),
            "keywords" => Ok(Field::Keywords),
            other => Err(format!("unknown field {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicAssignment {
    pub micro_id: String,
    pub meso_id: String,
    pub macro_id: String,
}

/// One bibliographic record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub keywords: Vec<String>,
    pub year: i32,
    /// Micro topic carried by the input file, if any. Resolved into
    /// [`Document::topic`] by [`Corpus::attach_topics`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic_micro: Option<String>,
    #[serde(skip)]
    pub topic: Option<TopicAssignment>,
}

impl Document {
    pub fn has_text(&self) -> bool {
        !self.title.trim().is_empty()
            || !self.abstract_text.trim().is_empty()
            || self.keywords.iter().any(|k| !k.trim().is_empty())
    }

    pub fn meso(&self) -> Option<&str> {
        self.topic.as_ref().map(|t| t.meso_id.as_str())
    }

    /// Token streams for all three fields.
    pub fn token_streams(&self) -> [TokenStream; 3] {
        [
            TokenStream::from_text(Field::Title, &self.title),
            TokenStream::from_text(Field::Abstract, &self.abstract_text),
            TokenStream::from_keywords(&self.keywords),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub position: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub field: Field,
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn from_text(field: Field, text: &str) -> Self {
        let tokens = tokenize(text)
            .into_iter()
            .zip(0u32..)
            .map(|(text, position)| Token { text, position })
            .collect();
        TokenStream { field, tokens }
    }

    /// Keywords are tokenized one at a time; consecutive keywords are separated
    /// by [`KEYWORD_POSITION_GAP`] unused positions.
    pub fn from_keywords(keywords: &[String]) -> Self {
        let mut tokens = Vec::new();
        let mut next = 0u32;
        for keyword in keywords {
            let toks = tokenize(keyword);
            if toks.is_empty() {
                continue;
            }
            if !tokens.is_empty() {
                next += KEYWORD_POSITION_GAP;
            }
            for text in toks {
                tokens.push(Token { text, position: next });
                next += 1;
            }
        }
        TokenStream {
            field: Field::Keywords,
            tokens,
        }
    }
}

/// Splits text into lowercase, NFKC-normalized runs of letters and digits.
///
/// No stemming and no stopword list: keyword systems match literal surface forms.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    if text.is_ascii() {
        for run in text.split(|c: char| !c.is_ascii_alphanumeric()) {
            if !run.is_empty() {
                out.push(run.to_ascii_lowercase());
            }
        }
        return out;
    }
    let normalized: String = text.nfkc().flat_map(char::to_lowercase).nfkc().collect();
    let mut current = String::new();
    for c in normalized.chars() {
        if c.is_alphanumeric() {
            current.push(c);
        } else if !current.is_empty() {
            out.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicEntry {
    pub name: String,
    pub parent: String,
}

/// Micro → meso → macro topic hierarchy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopicTaxonomy {
    pub micro: BTreeMap<String, TopicEntry>,
    pub meso: BTreeMap<String, TopicEntry>,
    pub macro_names: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct TaxonomyRow {
    micro_id: String,
    micro_name: String,
    meso_id: String,
    meso_name: String,
    macro_id: String,
    macro_name: String,
}

impl TopicTaxonomy {
    pub fn load(path: &Path) -> Result<Self> {
        let file = open(path)?;
        Self::from_reader(file)
    }

    /// Reads the `micro_id,micro_name,meso_id,meso_name,macro_id,macro_name` table.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut tax = TopicTaxonomy::default();
        for row in rdr.deserialize::<TaxonomyRow>() {
            let row = row?;
            tax.insert(row)?;
        }
        Ok(tax)
    }

    fn insert(&mut self, row: TaxonomyRow) -> Result<()> {
        if row.micro_id.is_empty() || row.meso_id.is_empty() || row.macro_id.is_empty() {
            return Err(CorpusError::Taxonomy(format!(
                "empty topic id in row for micro {:?}",
                row.micro_id
            )));
        }
        check_insert(
            &mut self.micro,
            "micro",
            &row.micro_id,
            TopicEntry {
                name: row.micro_name,
                parent: row.meso_id.clone(),
            },
        )?;
        check_insert(
            &mut self.meso,
            "meso",
            &row.meso_id,
            TopicEntry {
                name: row.meso_name,
                parent: row.macro_id.clone(),
            },
        )?;
        match self.macro_names.get(&row.macro_id) {
            Some(name) if *name != row.macro_name => Err(CorpusError::Taxonomy(format!(
                "macro topic {:?} has conflicting names {:?} and {:?}",
                row.macro_id, name, row.macro_name
            ))),
            Some(_) => Ok(()),
            None => {
                self.macro_names.insert(row.macro_id, row.macro_name);
                Ok(())
            }
        }
    }

    pub fn resolve(&self, micro_id: &str) -> Option<TopicAssignment> {
        let micro = self.micro.get(micro_id)?;
        let meso = self.meso.get(&micro.parent)?;
        Some(TopicAssignment {
            micro_id: micro_id.to_string(),
            meso_id: micro.parent.clone(),
            macro_id: meso.parent.clone(),
        })
    }

    pub fn meso_ids(&self) -> impl Iterator<Item = &str> {
        self.meso.keys().map(String::as_str)
    }

    pub fn meso_name(&self, meso_id: &str) -> Option<&str> {
        self.meso.get(meso_id).map(|e| e.name.as_str())
    }
}

fn check_insert(map: &mut BTreeMap<String, TopicEntry>, level: &str, id: &str, entry: TopicEntry) -> Result<()> {
    match map.get(id) {
        Some(existing) if *existing != entry => Err(CorpusError::Taxonomy(format!(
            "{level} topic {id:?} listed with conflicting name or parent ({:?} under {:?} vs {:?} under {:?})",
            existing.name, existing.parent, entry.name, entry.parent
        ))),
        Some(_) => Ok(()),
        None => {
            map.insert(id.to_string(), entry);
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttachWarning {
    UnknownDocument(String),
    UnknownMicroTopic { doc_id: String, micro_id: String },
}

impl fmt::Display for AttachWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttachWarning::UnknownDocument(id) => write!(f, "assignment for unknown document {id:?}"),
            AttachWarning::UnknownMicroTopic { doc_id, micro_id } => {
                write!(f, "document {doc_id:?} assigned unknown micro topic {micro_id:?}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttachReport {
    pub assigned: usize,
    pub warnings: Vec<AttachWarning>,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    docs: Vec<Document>,
    by_id: HashMap<String, usize>,
    skipped_rows: usize,
}

#[derive(Debug, Default, Deserialize)]
struct RawRecord {
    id: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default, rename = "abstract")]
    abstract_text: Option<String>,
    #[serde(default)]
    keywords: Option<Vec<String>>,
    year: Option<i32>,
    #[serde(default)]
    topic_micro: Option<String>,
}

#[derive(Debug, Deserialize)]
struct CsvRecord {
    id: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default, rename = "abstract")]
    abstract_text: Option<String>,
    #[serde(default)]
    keywords: Option<String>,
    year: Option<i32>,
    #[serde(default)]
    topic_micro: Option<String>,
}

impl RawRecord {
    fn into_document(self) -> Option<Document> {
        let id = self.id.filter(|id| !id.is_empty())?;
        let doc = Document {
            id,
            title: self.title.unwrap_or_default(),
            abstract_text: self.abstract_text.unwrap_or_default(),
            keywords: self.keywords.unwrap_or_default(),
            year: self.year?,
            topic_micro: self.topic_micro.filter(|m| !m.is_empty()),
            topic: None,
        };
        doc.has_text().then_some(doc)
    }
}

impl From<CsvRecord> for RawRecord {
    fn from(r: CsvRecord) -> Self {
        RawRecord {
            id: r.id,
            title: r.title,
            abstract_text: r.abstract_text,
            keywords: r.keywords.map(|k| {
                k.split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }),
            year: r.year,
            topic_micro: r.topic_micro,
        }
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl Corpus {
    /// Builds a corpus from already-constructed documents. Documents without
    /// an id or without any text are counted as skipped.
    pub fn from_documents(docs: impl IntoIterator<Item = Document>) -> Result<Self> {
        let mut corpus = Corpus::default();
        for doc in docs {
            if doc.id.is_empty() || !doc.has_text() {
                corpus.skipped_rows += 1;
                continue;
            }
            corpus.push(doc)?;
        }
        Ok(corpus)
    }

    fn push(&mut self, doc: Document) -> Result<()> {
        if self.by_id.contains_key(&doc.id) {
            return Err(CorpusError::DuplicateId(doc.id));
        }
        self.by_id.insert(doc.id.clone(), self.docs.len());
        self.docs.push(doc);
        Ok(())
    }

    fn push_raw(&mut self, raw: Option<RawRecord>) -> Result<()> {
        match raw.and_then(RawRecord::into_document) {
            Some(doc) => self.push(doc),
            None => {
                self.skipped_rows += 1;
                Ok(())
            }
        }
    }

    pub fn load(path: &Path, format: CorpusFormat) -> Result<Self> {
        let file = open(path)?;
        match format {
            CorpusFormat::Jsonl => Self::read_jsonl(BufReader::new(file)),
            CorpusFormat::Csv => Self::read_csv(file),
        }
        .map_err(|e| match e {
            CorpusError::Io { source, .. } => CorpusError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    /// One JSON object per line. Blank lines are ignored; lines that fail to
    /// parse or lack an id, a year or any text are skipped and counted.
    pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Self> {
        let mut corpus = Corpus::default();
        for line in reader.lines() {
            let line = line.map_err(|source| CorpusError::Io {
                path: PathBuf::new(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            corpus.push_raw(serde_json::from_str::<RawRecord>(&line).ok())?;
        }
        Ok(corpus)
    }

    /// Same columns as the JSONL form; `keywords` is `;`-joined.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut corpus = Corpus::default();
        for row in rdr.deserialize::<CsvRecord>() {
            corpus.push_raw(row.ok().map(RawRecord::from))?;
        }
        Ok(corpus)
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for doc in &self.docs {
            serde_json::to_writer(&mut out, doc)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "title", "abstract", "keywords", "year", "topic_micro"])?;
        for d in &self.docs {
            w.write_record([
                d.id.as_str(),
                d.title.as_str(),
                d.abstract_text.as_str(),
                d.keywords.join(";").as_str(),
                d.year.to_string().as_str(),
                d.topic_micro.as_deref().unwrap_or(""),
            ])?;
        }
        w.flush().map_err(|source| CorpusError::Io {
            path: PathBuf::new(),
            source,
        })?;
        Ok(())
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn skipped_rows(&self) -> usize {
        self.skipped_rows
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.by_id.get(id).map(|&i| &self.docs[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    /// `(doc id, micro id)` pairs taken from the corpus's own `topic_micro` column.
    pub fn embedded_assignments(&self) -> Vec<(String, String)> {
        self.docs
            .iter()
            .filter_map(|d| d.topic_micro.as_ref().map(|m| (d.id.clone(), m.clone())))
            .collect()
    }

    /// Resolves micro topic assignments through the taxonomy. Unknown
    /// documents and unknown micro topics are reported, not fatal.
    pub fn attach_topics(&mut self, taxonomy: &TopicTaxonomy, assignments: &[(String, String)]) -> AttachReport {
        let mut report = AttachReport::default();
        for (doc_id, micro_id) in assignments {
            let Some(&idx) = self.by_id.get(doc_id) else {
                report.warnings.push(AttachWarning::UnknownDocument(doc_id.clone()));
                continue;
            };
            match taxonomy.resolve(micro_id) {
                Some(topic) => {
                    if self.docs[idx].topic.is_none() {
                        report.assigned += 1;
                    }
                    self.docs[idx].topic = Some(topic);
                }
                None => report.warnings.push(AttachWarning::UnknownMicroTopic {
                    doc_id: doc_id.clone(),
                    micro_id: micro_id.clone(),
                }),
            }
        }
        report
    }
}

/// Reads a `doc_id,micro_id` assignment table.
pub fn load_assignments(path: &Path) -> Result<Vec<(String, String)>> {
    read_assignments(open(path)?)
}

pub fn read_assignments<R: Read>(reader: R) -> Result<Vec<(String, String)>> {
    #[derive(Deserialize)]
    struct Row {
        doc_id: String,
        micro_id: String,
    }
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize::<Row>()
        .map(|r| r.map(|r| (r.doc_id, r.micro_id)).map_err(CorpusError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(toks("Income inequality"), ["income", "inequality"]);
        assert_eq!(
            toks("long noncoding RNA (lncRNA)"),
            ["long", "noncoding", "rna", "lncrna"]
        );
        assert!(toks("").is_empty());
        assert_eq!(toks("socio-economic COVID-19"), ["socio", "economic", "covid", "19"]);
    }

    #[test]
    fn tokenize_applies_compatibility_normalization() {
        // fullwidth letters and the "fi" ligature fold to plain ascii
        assert_eq!(toks("ＳＤＧ ﬁnance"), ["sdg", "finance"]);
        assert_eq!(toks("Émigré"), ["émigré"]);
    }

    #[test]
    fn keyword_positions_leave_gaps() {
        let kws = vec!["income inequality".to_string(), "".into(), "gap".into()];
        let ts = TokenStream::from_keywords(&kws);
        let pos: Vec<_> = ts.tokens.iter().map(|t| (t.text.as_str(), t.position)).collect();
        assert_eq!(pos, [("income", 0), ("inequality", 1), ("gap", 102)]);
    }

    const THREE: &str = r#"{"id":"a","title":"Poverty","abstract":"","keywords":[],"year":2019}
{"id":"b","title":"","abstract":"Hunger","keywords":[],"year":2019}
{"id":"c","title":"","abstract":"","keywords":["health"],"year":2019}
"#;

    #[test]
    fn load_three_jsonl_records() {
        let c = Corpus::read_jsonl(THREE.as_bytes()).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.skipped_rows(), 0);
        assert_eq!(c.get("c").unwrap().keywords, ["health"]);
    }

    #[test]
    fn duplicate_id_is_fatal() {
        let input = format!("{THREE}{}\n", r#"{"id":"a","title":"again","year":2019}"#);
        let err = Corpus::read_jsonl(input.as_bytes()).unwrap_err();
        assert!(matches!(&err, CorpusError::DuplicateId(id) if id == "a"));
        assert!(err.to_string().contains("\"a\""));
    }

    #[test]
    fn rows_without_text_or_id_are_skipped() {
        let input = concat!(
            r#"{"id":"a","title":"Poverty","year":2019}"#,
            "\n",
            r#"{"id":"e","title":"","abstract":" ","keywords":[],"year":2019}"#,
            "\n",
            r#"{"title":"no id","year":2019}"#,
            "\n",
            "not json\n",
            "\n",
        );
        let c = Corpus::read_jsonl(input.as_bytes()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.skipped_rows(), 3);
    }

    #[test]
    fn empty_text_row_alone_counts_one_skip() {
        let input = concat!(
            r#"{"id":"a","title":"Poverty","year":2019}"#,
            "\n",
            r#"{"id":"e","title":"","abstract":"","keywords":[],"year":2019}"#,
            "\n",
        );
        let c = Corpus::read_jsonl(input.as_bytes()).unwrap();
        assert_eq!(c.skipped_rows(), 1);
    }

    #[test]
    fn csv_keywords_are_semicolon_joined() {
        let input = "id,title,abstract,keywords,year,topic_micro\n\
                     a,Water,Clean water,water; sanitation ;,2019,m1\n";
        let c = Corpus::read_csv(input.as_bytes()).unwrap();
        let d = c.get("a").unwrap();
        assert_eq!(d.keywords, ["water", "sanitation"]);
        assert_eq!(d.topic_micro.as_deref(), Some("m1"));
    }

    fn taxonomy() -> TopicTaxonomy {
        let csv = "micro_id,micro_name,meso_id,meso_name,macro_id,macro_name\n\
                   m1,Micro one,M2,Meso two,X,Macro X\n\
                   m2,Micro two,M2,Meso two,X,Macro X\n\
                   m3,Micro three,M3,Meso three,Y,Macro Y\n";
        TopicTaxonomy::from_reader(csv.as_bytes()).unwrap()
    }

    #[test]
    fn taxonomy_walk() {
        let t = taxonomy();
        assert_eq!(
            t.resolve("m1"),
            Some(TopicAssignment {
                micro_id: "m1".into(),
                meso_id: "M2".into(),
                macro_id: "X".into()
            })
        );
        assert_eq!(t.resolve("nope"), None);
        assert_eq!(t.meso_ids().collect::<Vec<_>>(), ["M2", "M3"]);
    }

    #[test]
    fn taxonomy_rejects_micro_with_two_parents() {
        let csv = "micro_id,micro_name,meso_id,meso_name,macro_id,macro_name\n\
                   m1,a,M1,x,X,y\n\
                   m1,a,M2,x,X,y\n";
        assert!(matches!(
            TopicTaxonomy::from_reader(csv.as_bytes()),
            Err(CorpusError::Taxonomy(_))
        ));
        let csv = "micro_id,micro_name,meso_id,meso_name,macro_id,macro_name\n\
                   m1,a,M1,x,X,y\n\
                   m2,b,M1,x,Y,z\n";
        assert!(matches!(
            TopicTaxonomy::from_reader(csv.as_bytes()),
            Err(CorpusError::Taxonomy(_))
        ));
    }

    #[test]
    fn attach_topics_counts_and_warnings() {
        let docs = (0..5).map(|i| Document {
            id: format!("d{i}"),
            title: "text".into(),
            abstract_text: String::new(),
            keywords: vec![],
            year: 2019,
            topic_micro: None,
            topic: None,
        });
        let mut c = Corpus::from_documents(docs).unwrap();
        let before: Vec<_> = c
            .docs()
            .iter()
            .map(|d| (d.title.clone(), d.abstract_text.clone()))
            .collect();
        let assignments: Vec<(String, String)> = vec![
            ("d0".into(), "m1".into()),
            ("d1".into(), "m2".into()),
            ("d3".into(), "m3".into()),
            ("zz".into(), "m1".into()),
            ("d4".into(), "m99".into()),
        ];
        let report = c.attach_topics(&taxonomy(), &assignments);
        assert_eq!(report.assigned, 3);
        assert_eq!(c.docs().iter().filter(|d| d.topic.is_some()).count(), 3);
        assert!(report.warnings.contains(&AttachWarning::UnknownDocument("zz".into())));
        assert_eq!(report.warnings.len(), 2);
        assert_eq!(c.get("d0").unwrap().meso(), Some("M2"));
        let after: Vec<_> = c
            .docs()
            .iter()
            .map(|d| (d.title.clone(), d.abstract_text.clone()))
            .collect();
        assert_eq!(before, after);
    }

    #[test]
    fn unreadable_file_names_path() {
        let err = Corpus::load(Path::new("/definitely/not/here.jsonl"), CorpusFormat::Jsonl).unwrap_err();
        assert!(err.to_string().contains("/definitely/not/here.jsonl"));
    }
}
