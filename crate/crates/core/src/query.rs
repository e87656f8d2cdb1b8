//! Query language for keyword labeling systems.
//!
//! ```text
//! or_expr  := and_expr ( "OR" and_expr )*
//! and_expr := unary ( "AND" unary )*
//! unary    := "NOT" unary | prox
//! prox     := scoped ( ("NEAR/" n | "W/" n) scoped )?
//! scoped   := field ":" scoped | atom
//! atom     := word | word"*" | '"' phrase '"' | "(" or_expr ")"
//! field    := "title" | "abstract" | "keywords" | "any"
//! ```
//!
//! Words and phrase contents go through [`tokenize`]; a bare word that splits
//! into several tokens (`covid-19`) becomes a phrase. `NOT` is only accepted
//! as an operand of `AND` next to at least one positive operand, so every
//! valid query needs some positive literal to be present in a document.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::corpus::{tokenize, Field};
use crate::sdg::Sdg;

pub const MIN_WILDCARD_STEM: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum SystemsError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("systems file: {0}")]
    Csv(#[from] csv::Error),
    #[error("systems file line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("system {system:?}, query {query_id:?}: {source}")]
    Query {
        system: String,
        query_id: String,
        #[source]
        source: ParseError,
    },
}

/// Which document fields a subtree may match in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Any,
    Only(Field),
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Any => "any",
            Scope::Only(f) => f.as_str(),
        }
    }

    fn parse(name: &str) -> Option<Self> {
        match name {
            "any" => Some(Scope::Any),
            other => other.parse().ok().map(Scope::Only),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Query {
    Term {
        text: String,
        wildcard: bool,
    },
    Phrase(Vec<String>),
    Near {
        left: Box<Query>,
        right: Box<Query>,
        window: u32,
        ordered: bool,
    },
    And(Vec<Query>),
    Or(Vec<Query>),
    Not(Box<Query>),
    Scoped {
        scope: Scope,
        child: Box<Query>,
    },
}

/// A positive or negated leaf token of a query.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub stem: String,
    pub wildcard: bool,
}

impl Literal {
    pub fn exact(stem: impl Into<String>) -> Self {
        Literal {
            stem: stem.into(),
            wildcard: false,
        }
    }

    pub fn prefix(stem: impl Into<String>) -> Self {
        Literal {
            stem: stem.into(),
            wildcard: true,
        }
    }

    /// `stem`, or `stem*` for wildcards. Used as node identity downstream.
    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn from_label(label: &str) -> Self {
        match label.strip_suffix('*') {
            Some(stem) => Literal::prefix(stem),
            None => Literal::exact(label),
        }
    }

    pub fn matches(&self, token: &str) -> bool {
        if self.wildcard {
            token.starts_with(self.stem.as_str())
        } else {
            token == self.stem
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.stem)?;
        if self.wildcard {
            f.write_str("*")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Literals {
    pub positive: Vec<Literal>,
    pub negative: Vec<Literal>,
}

impl Query {
    pub fn term(text: &str) -> Self {
        Query::Term {
            text: text.to_string(),
            wildcard: false,
        }
    }

    pub fn prefix(stem: &str) -> Self {
        Query::Term {
            text: stem.to_string(),
            wildcard: true,
        }
    }

    pub fn phrase(tokens: &[&str]) -> Self {
        Query::Phrase(tokens.iter().map(|t| t.to_string()).collect())
    }

    fn is_leaf(&self) -> bool {
        matches!(self, Query::Term { .. } | Query::Phrase(_))
    }

    /// Checks the structural invariants that the parser enforces, for ASTs
    /// built in code.
    pub fn validate(&self) -> Result<(), String> {
        self.validate_inner(false)
    }

    fn validate_inner(&self, under_and: bool) -> Result<(), String> {
        match self {
            Query::Term { text, wildcard } => {
                if text.is_empty() {
                    return Err("empty term".into());
                }
                if tokenize(text) != [text.as_str()] {
                    return Err(format!("term {text:?} is not a single normalized token"));
                }
                if *wildcard && text.chars().count() < MIN_WILDCARD_STEM {
                    return Err(format!("wildcard stem {text:?} shorter than {MIN_WILDCARD_STEM}"));
                }
                Ok(())
            }
            Query::Phrase(tokens) => {
                if tokens.is_empty() {
                    return Err("empty phrase".into());
                }
                for t in tokens {
                    if tokenize(t) != [t.as_str()] {
                        return Err(format!("phrase token {t:?} is not a single normalized token"));
                    }
                }
                Ok(())
            }
            Query::Near {
                left, right, window, ..
            } => {
                if *window == 0 {
                    return Err("proximity window must be at least 1".into());
                }
                for side in [left, right] {
                    if !side.is_leaf() {
                        return Err("proximity operands must be terms or phrases".into());
                    }
                    side.validate_inner(false)?;
                }
                Ok(())
            }
            Query::And(children) => {
                if children.len() < 2 {
                    return Err("AND needs at least two operands".into());
                }
                if children.iter().all(|c| matches!(c, Query::Not(_))) {
                    return Err("AND needs at least one non-negated operand".into());
                }
                children.iter().try_for_each(|c| c.validate_inner(true))
            }
            Query::Or(children) => {
                if children.len() < 2 {
                    return Err("OR needs at least two operands".into());
                }
                children.iter().try_for_each(|c| c.validate_inner(false))
            }
            Query::Not(child) => {
                if !under_and {
                    return Err("top-level negation: NOT must be an operand of AND".into());
                }
                if matches!(**child, Query::Not(_)) {
                    return Err("double negation".into());
                }
                child.validate_inner(false)
            }
            Query::Scoped { child, .. } => child.validate_inner(false),
        }
    }

    /// Literals reachable outside any `NOT` (positive) and inside one (negative),
    /// each list deduplicated in first-occurrence order.
    pub fn literals(&self) -> Literals {
        let mut out = Literals::default();
        let mut seen = (HashSet::new(), HashSet::new());
        self.collect_literals(false, &mut out, &mut seen);
        out
    }

    fn collect_literals(&self, negated: bool, out: &mut Literals, seen: &mut (HashSet<Literal>, HashSet<Literal>)) {
        let mut push = |lit: Literal| {
            let (list, set) = if negated {
                (&mut out.negative, &mut seen.1)
            } else {
                (&mut out.positive, &mut seen.0)
            };
            if set.insert(lit.clone()) {
                list.push(lit);
            }
        };
        match self {
            Query::Term { text, wildcard } => push(Literal {
                stem: text.clone(),
                wildcard: *wildcard,
            }),
            Query::Phrase(tokens) => tokens.iter().for_each(|t| push(Literal::exact(t.clone()))),
            Query::Near { left, right, .. } => {
                left.collect_literals(negated, out, seen);
                right.collect_literals(negated, out, seen);
            }
            Query::And(children) | Query::Or(children) => {
                children.iter().for_each(|c| c.collect_literals(negated, out, seen))
            }
            Query::Not(child) => child.collect_literals(true, out, seen),
            Query::Scoped { child, .. } => child.collect_literals(negated, out, seen),
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::And(_) | Query::Or(_) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

/// Canonical printer; `parse_query(&q.to_string()) == Ok(q)` for valid ASTs.
impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Term { text, wildcard } => {
                f.write_str(text)?;
                if *wildcard {
                    f.write_str("*")?;
                }
                Ok(())
            }
            Query::Phrase(tokens) => write!(f, "\"{}\"", tokens.join(" ")),
            Query::Near {
                left,
                right,
                window,
                ordered,
            } => {
                let op = if *ordered { "W" } else { "NEAR" };
                write!(f, "{left} {op}/{window} {right}")
            }
            Query::And(children) | Query::Or(children) => {
                let op = if matches!(self, Query::And(_)) { " AND " } else { " OR " };
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    c.fmt_operand(f)?;
                }
                Ok(())
            }
            Query::Not(child) => {
                f.write_str("NOT ")?;
                child.fmt_operand(f)
            }
            Query::Scoped { scope, child } => {
                write!(f, "{}:", scope.as_str())?;
                if child.is_leaf() {
                    write!(f, "{child}")
                } else {
                    write!(f, "({child})")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    And,
    Or,
    Not,
    Prox { window: u32, ordered: bool },
    Field(Scope),
    Word(String),
    Phrase(String),
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        offset,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = src[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        match c {
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '"' => {
                let start = i;
                let Some(len) = src[i + 1..].find('"') else {
                    return Err(syntax(start, "unterminated phrase"));
                };
                out.push((Tok::Phrase(src[i + 1..i + 1 + len].to_string()), start));
                i += len + 2;
            }
            ':' => return Err(syntax(i, "unexpected ':'")),
            _ => {
                let start = i;
                let end = src[i..]
                    .find(|c: char| c.is_whitespace() || matches!(c, '(' | ')' | '"' | ':'))
                    .map_or(src.len(), |n| i + n);
                let word = &src[start..end];
                i = end;
                if src[i..].starts_with(':') {
                    let scope = Scope::parse(word).ok_or_else(|| syntax(start, format!("unknown field {word:?}")))?;
                    out.push((Tok::Field(scope), start));
                    i += 1;
                    continue;
                }
                out.push((keyword(word, start)?, start));
            }
        }
    }
    Ok(out)
}

fn keyword(word: &str, offset: usize) -> Result<Tok, ParseError> {
    let prox = |rest: &str, ordered: bool| -> Result<Tok, ParseError> {
        let window: i64 = rest
            .parse()
            .map_err(|_| syntax(offset, format!("invalid proximity window in {word:?}")))?;
        if window <= 0 {
            return Err(syntax(
                offset,
                format!("proximity window must be at least 1, got {window}"),
            ));
        }
        let window =
            u32::try_from(window).map_err(|_| syntax(offset, format!("proximity window too large in {word:?}")))?;
        Ok(Tok::Prox { window, ordered })
    };
    Ok(match word {
        "AND" => Tok::And,
        "OR" => Tok::Or,
        "NOT" => Tok::Not,
        _ if word.starts_with("NEAR/") => return prox(&word[5..], false),
        _ if word.starts_with("W/") => return prox(&word[2..], true),
        _ => Tok::Word(word.to_string()),
    })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, o)| o)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn or_expr(&mut self) -> Result<Query, ParseError> {
        let mut children = vec![self.and_operand()?];
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            children.push(self.and_operand()?);
        }
        Ok(if children.len() == 1 {
            children.pop().unwrap()
        } else {
            Query::Or(children)
        })
    }

    /// An `and_expr` whose result must not be a bare negation.
    fn and_operand(&mut self) -> Result<Query, ParseError> {
        let start = self.offset();
        let q = self.and_expr()?;
        if matches!(q, Query::Not(_)) {
            return Err(syntax(start, "top-level negation: NOT must be an operand of AND"));
        }
        Ok(q)
    }

    fn and_expr(&mut self) -> Result<Query, ParseError> {
        let start = self.offset();
        let mut children = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.bump();
            children.push(self.unary()?);
        }
        if children.len() == 1 {
            return Ok(children.pop().unwrap());
        }
        if children.iter().all(|c| matches!(c, Query::Not(_))) {
            return Err(syntax(
                start,
                "top-level negation: AND needs at least one non-negated operand",
            ));
        }
        Ok(Query::And(children))
    }

    fn unary(&mut self) -> Result<Query, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            let (_, at) = self.bump().unwrap();
            let child = self.unary()?;
            if matches!(child, Query::Not(_)) {
                return Err(syntax(at, "double negation"));
            }
            return Ok(Query::Not(Box::new(child)));
        }
        self.prox()
    }

    fn prox(&mut self) -> Result<Query, ParseError> {
        let left_at = self.offset();
        let left = self.scoped()?;
        let Some(&Tok::Prox { window, ordered }) = self.peek() else {
            return Ok(left);
        };
        self.bump();
        let right_at = self.offset();
        let right = self.scoped()?;
        for (side, at) in [(&left, left_at), (&right, right_at)] {
            if !side.is_leaf() {
                return Err(syntax(at, "proximity operands must be terms or phrases"));
            }
        }
        if let Some(Tok::Prox { .. }) = self.peek() {
            return Err(syntax(self.offset(), "proximity operators cannot be chained"));
        }
        Ok(Query::Near {
            left: Box::new(left),
            right: Box::new(right),
            window,
            ordered,
        })
    }

    fn scoped(&mut self) -> Result<Query, ParseError> {
        if let Some(&Tok::Field(scope)) = self.peek() {
            self.bump();
            let child = self.scoped()?;
            return Ok(Query::Scoped {
                scope,
                child: Box::new(child),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Query, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some((Tok::LParen, _)) => {
                let inner = self.or_expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    Some((_, o)) => Err(syntax(o, "expected ')'")),
                    None => Err(syntax(self.end, "unclosed '('")),
                }
            }
            Some((Tok::Word(w), _)) => word_query(&w, at),
            Some((Tok::Phrase(p), _)) => {
                let tokens = tokenize(&p);
                if tokens.is_empty() {
                    return Err(syntax(at, "empty phrase"));
                }
                Ok(Query::Phrase(tokens))
            }
            Some((tok, o)) => Err(syntax(
                o,
                format!("expected a term, phrase or '(' but found {}", describe(&tok)),
            )),
            None => Err(syntax(self.end, "unexpected end of query")),
        }
    }
}

fn describe(tok: &Tok) -> &'static str {
    match tok {
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::And => "AND",
        Tok::Or => "OR",
        Tok::Not => "NOT",
        Tok::Prox { .. } => "a proximity operator",
        Tok::Field(_) => "a field prefix",
        Tok::Word(_) => "a term",
        Tok::Phrase(_) => "a phrase",
    }
}

fn word_query(word: &str, at: usize) -> Result<Query, ParseError> {
    let (stem, wildcard) = match word.strip_suffix('*') {
        Some(stem) => (stem, true),
        None => (word, false),
    };
    if stem.contains('*') {
        return Err(syntax(at, "wildcards are only supported as a trailing '*'"));
    }
    let mut tokens = tokenize(stem);
    if wildcard {
        if tokens.len() != 1 {
            return Err(syntax(at, format!("wildcard {word:?} must apply to a single token")));
        }
        let stem = tokens.pop().unwrap();
        if stem.chars().count() < MIN_WILDCARD_STEM {
            return Err(syntax(
                at,
                format!("wildcard stem {stem:?} shorter than {MIN_WILDCARD_STEM} characters"),
            ));
        }
        return Ok(Query::Term {
            text: stem,
            wildcard: true,
        });
    }
    match tokens.len() {
        0 => Err(syntax(at, format!("term {word:?} has no letters or digits"))),
        1 => Ok(Query::Term {
            text: tokens.pop().unwrap(),
            wildcard: false,
        }),
        _ => Ok(Query::Phrase(tokens)),
    }
}

pub fn parse_query(source: &str) -> Result<Query, ParseError> {
    if source.trim().is_empty() {
        return Err(syntax(0, "empty query"));
    }
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: source.len(),
    };
    let q = p.or_expr()?;
    if let Some((tok, o)) = p.bump() {
        let msg = match tok {
            Tok::RParen => "unbalanced ')'".to_string(),
            other => format!("expected AND or OR before {}", describe(&other)),
        };
        return Err(syntax(o, msg));
    }
    debug_assert_eq!(q.validate(), Ok(()));
    Ok(q)
}

pub fn query_literals(ast: &Query) -> Literals {
    ast.literals()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryEntry {
    pub sdg: Sdg,
    pub query_id: String,
    pub query: Query,
}

/// A named labeling system: queries, each attached to one SDG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDef {
    pub name: String,
    pub entries: Vec<QueryEntry>,
}

impl SystemDef {
    pub fn new(name: impl Into<String>) -> Self {
        SystemDef {
            name: name.into(),
            entries: Vec::new(),
        }
    }

    /// Adds a query parsed from `source`.
    pub fn with_query(mut self, sdg: u8, query_id: &str, source: &str) -> Result<Self, SystemsError> {
        let sdg = Sdg::new(sdg).ok_or_else(|| SystemsError::Row {
            line: 0,
            message: format!("sdg {sdg} outside 1..=17"),
        })?;
        let query = parse_query(source).map_err(|source| SystemsError::Query {
            system: self.name.clone(),
            query_id: query_id.to_string(),
            source,
        })?;
        self.entries.push(QueryEntry {
            sdg,
            query_id: query_id.to_string(),
            query,
        });
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.name.is_empty() {
            return Err("system name is empty".into());
        }
        let mut ids = HashSet::new();
        for e in &self.entries {
            if !ids.insert(e.query_id.as_str()) {
                return Err(format!("system {:?}: duplicate query_id {:?}", self.name, e.query_id));
            }
            e.query
                .validate()
                .map_err(|m| format!("system {:?}, query {:?}: {m}", self.name, e.query_id))?;
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
struct SystemRow {
    system: String,
    sdg: String,
    query_id: String,
    query: String,
}

pub fn load_systems(path: &Path) -> Result<Vec<SystemDef>, SystemsError> {
    let file = File::open(path).map_err(|source| SystemsError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_systems(file)
}

/// Reads the `system,sdg,query_id,query` table. Systems keep first-appearance order.
pub fn read_systems<R: Read>(reader: R) -> Result<Vec<SystemDef>, SystemsError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    for required in ["system", "sdg", "query_id", "query"] {
        if !headers.iter().any(|h| h == required) {
            return Err(SystemsError::Row {
                line: 1,
                message: format!("missing column {required:?}"),
            });
        }
    }
    let mut systems: Vec<SystemDef> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record)? {
        let line = record.position().map_or(0, |p| p.line());
        let row: SystemRow = record.deserialize(Some(&headers))?;
        let name = row.system.trim().to_string();
        if name.is_empty() {
            return Err(SystemsError::Row {
                line,
                message: "empty system name".into(),
            });
        }
        let sdg: Sdg = row.sdg.parse().map_err(|message| SystemsError::Row { line, message })?;
        let query_id = row.query_id.trim().to_string();
        if query_id.is_empty() || query_id.contains(';') {
            return Err(SystemsError::Row {
                line,
                message: format!("invalid query_id {query_id:?}"),
            });
        }
        let query = parse_query(&row.query).map_err(|source| SystemsError::Query {
            system: name.clone(),
            query_id: query_id.clone(),
            source,
        })?;
        let idx = *index.entry(name.clone()).or_insert_with(|| {
            systems.push(SystemDef::new(name.clone()));
            systems.len() - 1
        });
        let sys = &mut systems[idx];
        if sys.entries.iter().any(|e| e.query_id == query_id) {
            return Err(SystemsError::Row {
                line,
                message: format!("duplicate query_id {query_id:?} in system {name:?}"),
            });
        }
        sys.entries.push(QueryEntry { sdg, query_id, query });
    }
    Ok(systems)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Query {
        parse_query(s).unwrap_or_else(|e| panic!("{s:?}: {e}"))
    }

    fn err(s: &str) -> ParseError {
        parse_query(s).expect_err(s)
    }

    #[test]
    fn phrase_and_wildcard() {
        assert_eq!(
            parse(r#""income inequality" AND migrat*"#),
            Query::And(vec![Query::phrase(&["income", "inequality"]), Query::prefix("migrat")])
        );
    }

    #[test]
    fn proximity_operators() {
        assert_eq!(
            parse("poverty NEAR/3 alleviation"),
            Query::Near {
                left: Box::new(Query::term("poverty")),
                right: Box::new(Query::term("alleviation")),
                window: 3,
                ordered: false,
            }
        );
        assert!(matches!(
            parse(r#""wealth gap" W/5 income"#),
            Query::Near {
                ordered: true,
                window: 5,
                ..
            }
        ));
    }

    #[test]
    fn top_level_not_rejected() {
        let e = err("NOT poverty");
        assert!(e.message.contains("top-level negation"), "{e}");
        assert_eq!(e.offset, 0);
        assert!(err("a OR NOT b").message.contains("top-level negation"));
        assert!(err("(NOT b) AND a").message.contains("top-level negation"));
        assert!(err("NOT a AND NOT b").message.contains("top-level negation"));
        assert!(err("a AND NOT NOT b").message.contains("double negation"));
    }

    #[test]
    fn precedence_not_and_or() {
        assert_eq!(
            parse("a OR b AND c"),
            Query::Or(vec![
                Query::term("a"),
                Query::And(vec![Query::term("b"), Query::term("c")])
            ])
        );
        assert_eq!(
            parse("a AND NOT b OR c"),
            Query::Or(vec![
                Query::And(vec![Query::term("a"), Query::Not(Box::new(Query::term("b")))]),
                Query::term("c"),
            ])
        );
    }

    #[test]
    fn field_scopes() {
        assert_eq!(
            parse("title:(water OR sanitation) AND keywords:\"clean water\""),
            Query::And(vec![
                Query::Scoped {
                    scope: Scope::Only(Field::Title),
                    child: Box::new(Query::Or(vec![Query::term("water"), Query::term("sanitation")])),
                },
                Query::Scoped {
                    scope: Scope::Only(Field::Keywords),
                    child: Box::new(Query::phrase(&["clean", "water"])),
                },
            ])
        );
        assert!(err("author:smith").message.contains("unknown field"));
        assert!(err("title:x NEAR/2 y").message.contains("proximity operands"));
    }

    #[test]
    fn word_normalization() {
        assert_eq!(parse("Poverty"), Query::term("poverty"));
        assert_eq!(parse("COVID-19"), Query::phrase(&["covid", "19"]));
        assert_eq!(
            parse("\"Long  non-coding RNA\""),
            Query::phrase(&["long", "non", "coding", "rna"])
        );
    }

    #[test]
    fn error_cases_with_offsets() {
        let e = err("health AND mi*");
        assert_eq!(e.offset, 11);
        assert!(e.message.contains("shorter than 3"));
        let e = err("a NEAR/0 b");
        assert_eq!(e.offset, 2);
        assert!(e.message.contains("at least 1"));
        assert!(err("a NEAR/-2 b").message.contains("at least 1"));
        assert_eq!(err("a b").offset, 2);
        assert_eq!(err("(a OR b").offset, 7);
        assert_eq!(err("a OR b)").offset, 6);
        assert_eq!(err("\"open").offset, 0);
        assert!(err("").message.contains("empty"));
        assert!(err("\"--\"").message.contains("empty phrase"));
        assert!(err("a AND").message.contains("end of query"));
        assert!(err("mi*gr").message.contains("trailing"));
        assert!(err("a NEAR/2 b NEAR/2 c").message.contains("chained"));
        assert!(err("(a OR b) NEAR/2 c").message.contains("proximity operands"));
    }

    #[test]
    fn literals_dedup_and_negatives() {
        let lits = parse(r#""income inequality" AND migrat*"#).literals();
        assert_eq!(
            lits.positive,
            [
                Literal::exact("income"),
                Literal::exact("inequality"),
                Literal::prefix("migrat")
            ]
        );
        assert!(lits.negative.is_empty());

        let lits = parse("health AND NOT animal").literals();
        assert_eq!(lits.positive, [Literal::exact("health")]);
        assert_eq!(lits.negative, [Literal::exact("animal")]);

        let lits = parse("abc* OR abc*").literals();
        assert_eq!(lits.positive, [Literal::prefix("abc")]);
    }

    #[test]
    fn printer_examples() {
        for src in [
            "a OR b AND c",
            "(a OR b) AND NOT (c OR d)",
            "title:(\"clean water\" W/4 access)",
            "keywords:(migrat* AND NOT title:bird)",
            "(a AND b) AND c",
        ] {
            let q = parse(src);
            assert_eq!(parse(&q.to_string()), q, "{src} -> {q}");
        }
        assert_eq!(parse("a OR b AND c").to_string(), "a OR (b AND c)");
    }

    const SYSTEMS: &str = "system,sdg,query_id,query\n\
        S1,1,q1,poverty\n\
        S2,10,q1,\"\"\"income inequality\"\" OR migrat*\"\n";

    #[test]
    fn load_two_systems() {
        let sys = read_systems(SYSTEMS.as_bytes()).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[0].name, "S1");
        assert_eq!(sys[0].entries.len(), 1);
        assert_eq!(sys[1].entries[0].sdg, Sdg::new(10).unwrap());
        assert!(matches!(sys[1].entries[0].query, Query::Or(_)));
    }

    #[test]
    fn sdg_out_of_range_names_row() {
        let input = "system,sdg,query_id,query\nS1,1,q1,a\nS1,18,q2,b\n";
        let e = read_systems(input.as_bytes()).unwrap_err();
        assert!(matches!(e, SystemsError::Row { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("line 3"));
    }

    #[test]
    fn bad_query_names_system_and_id() {
        let input = "system,sdg,query_id,query\nAurora,3,q7,NOT health\n";
        let e = read_systems(input.as_bytes()).unwrap_err();
        let msg = e.to_string();
        assert!(
            msg.contains("Aurora") && msg.contains("q7") && msg.contains("top-level negation"),
            "{msg}"
        );
    }

    #[test]
    fn duplicate_query_id_rejected() {
        let input = "system,sdg,query_id,query\nS,1,q,a\nS,2,q,b\n";
        assert!(matches!(
            read_systems(input.as_bytes()),
            Err(SystemsError::Row { line: 3, .. })
        ));
    }

    #[test]
    fn validate_catches_programmatic_misuse() {
        assert!(Query::Not(Box::new(Query::term("a"))).validate().is_err());
        assert!(Query::And(vec![Query::term("a")]).validate().is_err());
        assert!(Query::prefix("ab").validate().is_err());
        assert!(Query::term("Upper").validate().is_err());
        assert!(Query::Near {
            left: Box::new(Query::And(vec![Query::term("a"), Query::term("b")])),
            right: Box::new(Query::term("c")),
            window: 2,
            ordered: false,
        }
        .validate()
        .is_err());
    }
}
