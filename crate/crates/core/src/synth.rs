//! Deterministic synthetic corpora, taxonomies and labeling systems.
//!
//! Used for the shipped fixtures under `fixtures/` and for throughput tests.
//! Real labeling systems and bibliographic data are licensed inputs; these
//! generators only produce shapes that exercise every code path.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Document;

/// Theme vocabularies; index `i` is loosely about SDG `i + 1`. The last entry
/// is a molecular-biology theme that reuses "migration" in another sense.
pub const THEMES: [&[&str]; 18] = [
    &[
        "poverty",
        "poor",
        "income",
        "welfare",
        "microfinance",
        "extreme",
        "social",
        "protection",
    ],
    &[
        "hunger",
        "food",
        "malnutrition",
        "crop",
        "agriculture",
        "security",
        "famine",
    ],
    &[
        "health",
        "disease",
        "mortality",
        "vaccine",
        "hospital",
        "public",
        "patients",
    ],
    &["education", "school", "learning", "teacher", "literacy", "students"],
    &["gender", "women", "girls", "equality", "empowerment", "female"],
    &["water", "sanitation", "drinking", "wastewater", "hygiene", "clean"],
    &["energy", "solar", "renewable", "electricity", "fuel", "wind"],
    &["employment", "labour", "economic", "growth", "wage", "workers"],
    &[
        "infrastructure",
        "innovation",
        "industry",
        "manufacturing",
        "technology",
    ],
    &[
        "inequality",
        "migration",
        "migrants",
        "discrimination",
        "racial",
        "income",
        "gap",
        "wealth",
    ],
    &["urban", "city", "housing", "transport", "slum", "cities"],
    &["consumption", "waste", "recycling", "production", "circular"],
    &["climate", "warming", "emission", "carbon", "adaptation", "change"],
    &["marine", "ocean", "fisheries", "coastal", "coral", "sea"],
    &["forest", "biodiversity", "species", "land", "desertification", "soil"],
    &["violence", "justice", "corruption", "institutions", "conflict", "peace"],
    &["partnership", "cooperation", "aid", "trade", "development"],
    &[
        "cell",
        "migration",
        "proliferation",
        "rna",
        "lncrna",
        "tumor",
        "expression",
        "noncoding",
    ],
];

/// Theme index → meso topic of its documents.
const THEME_MESO: [&str; 18] = [
    "M03", "M08", "M01", "M04", "M05", "M07", "M06", "M04", "M06", "M03", "M03", "M08", "M06", "M07", "M08", "M05",
    "M04", "M02",
];

const MESO: [(&str, &str, &str, &str); 8] = [
    ("M01", "Public Health & Epidemiology", "X1", "Clinical & Life Sciences"),
    ("M02", "Micro & Long Noncoding RNA", "X1", "Clinical & Life Sciences"),
    ("M03", "Human Geography & Migration", "X2", "Social Sciences"),
    ("M04", "Education & Labour", "X2", "Social Sciences"),
    ("M05", "Gender & Conflict Studies", "X2", "Social Sciences"),
    ("M06", "Climate & Energy", "X3", "Earth & Environmental Sciences"),
    ("M07", "Water & Oceans", "X3", "Earth & Environmental Sciences"),
    ("M08", "Agriculture & Land", "X3", "Earth & Environmental Sciences"),
];

const FILLER: &[&str] = &[
    "study",
    "results",
    "analysis",
    "method",
    "data",
    "model",
    "effect",
    "approach",
    "evidence",
    "impact",
    "factors",
    "new",
    "based",
    "using",
    "role",
    "level",
    "review",
    "case",
    "system",
    "framework",
    "between",
    "among",
    "across",
    "within",
    "during",
    "associated",
    "significant",
    "higher",
    "lower",
    "increase",
    "decrease",
    "trends",
    "policy",
    "regional",
    "national",
    "global",
    "local",
    "population",
    "sample",
    "survey",
    "measure",
    "outcomes",
    "the",
    "of",
    "and",
    "in",
    "for",
    "with",
    "on",
    "to",
    "a",
    "is",
    "are",
    "we",
    "this",
    "that",
    "from",
    "by",
    "as",
    "our",
    "these",
    "findings",
    "suggest",
    "show",
    "provide",
    "paper",
    "research",
    "field",
    "experimental",
    "observed",
    "compared",
    "relationship",
    "dynamics",
    "network",
    "structure",
    "process",
];

/// Taxonomy table for the synthetic corpus, two or three micro topics per meso.
pub fn taxonomy_csv() -> String {
    let mut out = String::from("micro_id,micro_name,meso_id,meso_name,macro_id,macro_name\n");
    for (i, (meso, name, mac, mac_name)) in MESO.iter().enumerate() {
        let n_micro = 2 + i % 2;
        for j in 0..n_micro {
            let micro = format!("{}{}", meso.replace('M', "m"), (b'a' + j as u8) as char);
            writeln!(out, "{micro},{name} ({}),{meso},{name},{mac},{mac_name}", j + 1).unwrap();
        }
    }
    out
}

fn micro_for(meso: &str, rng: &mut impl Rng) -> String {
    let i = MESO.iter().position(|m| m.0 == meso).unwrap();
    let n = 2 + i % 2;
    format!(
        "{}{}",
        meso.replace('M', "m"),
        (b'a' + rng.gen_range(0..n) as u8) as char
    )
}

fn words(rng: &mut impl Rng, themes: &[usize], n: usize, theme_rate: f64) -> Vec<&'static str> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(theme_rate) {
                let t = themes[rng.gen_range(0..themes.len())];
                THEMES[t][rng.gen_range(0..THEMES[t].len())]
            } else {
                FILLER[rng.gen_range(0..FILLER.len())]
            }
        })
        .collect()
}

fn sentence_case(ws: &[&str]) -> String {
    let mut s = String::new();
    for (i, w) in ws.iter().enumerate() {
        if i > 0 {
            s.push_str(if i % 13 == 0 { ". " } else { " " });
        }
        if i == 0 || i % 13 == 0 {
            let mut c = w.chars();
            if let Some(first) = c.next() {
                s.extend(first.to_uppercase());
                s.push_str(c.as_str());
            }
        } else {
            s.push_str(w);
        }
    }
    if !s.is_empty() {
        s.push('.');
    }
    s
}

/// A synthetic corpus with `n` documents, roughly `abstract_tokens` abstract
/// tokens each. About one document in ten carries no topic.
pub fn corpus(n: usize, abstract_tokens: usize, seed: u64) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let primary = rng.gen_range(0..THEMES.len());
            let mut themes = vec![primary];
            if rng.gen_bool(0.4) {
                themes.push(rng.gen_range(0..THEMES.len()));
            }
            let title_len = rng.gen_range(6..12);
            let title = words(&mut rng, &themes, title_len, 0.45);
            let abs = words(&mut rng, &themes, abstract_tokens, 0.2);
            let n_kw = rng.gen_range(2..6);
            let keywords = (0..n_kw)
                .map(|_| {
                    let len = rng.gen_range(1..3);
                    words(&mut rng, &themes, len, 0.8).join(" ")
                })
                .collect();
            let topic_micro = (!rng.gen_bool(0.1)).then(|| micro_for(THEME_MESO[primary], &mut rng));
            Document {
                id: format!("doc{:05}", i + 1),
                title: sentence_case(&title),
                abstract_text: sentence_case(&abs),
                keywords,
                year: 2019,
                topic_micro,
                topic: None,
            }
        })
        .collect()
}

fn jsonl(docs: &[Document]) -> String {
    let mut out = String::new();
    for d in docs {
        out.push_str(&serde_json::to_string(d).expect("documents serialize"));
        out.push('\n');
    }
    out
}

/// The shipped 200-document fixture corpus.
pub fn fixture_corpus() -> Vec<Document> {
    corpus(200, 60, 2019)
}

pub fn fixture_corpus_jsonl() -> String {
    jsonl(&fixture_corpus())
}

/// `doc_id,micro_id` for every fixture document that has a topic.
pub fn fixture_assignments_csv() -> String {
    let mut out = String::from("doc_id,micro_id\n");
    for d in fixture_corpus() {
        if let Some(m) = &d.topic_micro {
            writeln!(out, "{},{m}", d.id).unwrap();
        }
    }
    out
}

/// Similarity between meso topics of the same macro topic.
pub fn topic_similarity_csv() -> String {
    let mut out = String::from("meso_i,meso_j,s\n");
    for (i, a) in MESO.iter().enumerate() {
        for b in &MESO[i + 1..] {
            if a.2 == b.2 {
                writeln!(out, "{},{},0.3", a.0, b.0).unwrap();
            }
        }
    }
    out
}

fn systems_csv(rows: impl IntoIterator<Item = (String, u8, String, String)>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["system", "sdg", "query_id", "query"]).unwrap();
    for (system, sdg, id, query) in rows {
        w.write_record([system, sdg.to_string(), id, query]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Three hand-written systems (48 queries) covering phrases, wildcards,
/// proximity, negation and field scopes. `Gamma` has no SDG-17 query.
pub const FIXTURE_QUERIES: &[(&str, u8, &str, &str)] = &[
    ("Alpha", 1, "a01", r#"poverty OR "extreme poverty""#),
    ("Alpha", 1, "a02", r#""social protection" AND NOT title:health"#),
    ("Alpha", 2, "a03", "hunger OR famine OR malnutrition"),
    ("Alpha", 2, "a04", r#""food security""#),
    ("Alpha", 3, "a05", "health NEAR/5 public"),
    ("Alpha", 3, "a06", "vaccin* OR mortality"),
    ("Alpha", 4, "a07", "education AND (school OR teacher*)"),
    ("Alpha", 5, "a08", "gender W/3 equality"),
    ("Alpha", 5, "a09", "women AND empower*"),
    ("Alpha", 6, "a10", r#""drinking water" OR sanitation"#),
    ("Alpha", 7, "a11", "renewable AND (energy OR electricity)"),
    ("Alpha", 8, "a12", "employment OR wage*"),
    ("Alpha", 9, "a13", "title:innovation OR infrastructure"),
    ("Alpha", 10, "a14", "inequality OR migrat*"),
    ("Alpha", 10, "a15", r#""income inequality""#),
    ("Alpha", 11, "a16", "urban AND housing"),
    ("Alpha", 13, "a17", "climate W/2 change"),
    ("Alpha", 14, "a18", "marine OR coral OR fisheries"),
    ("Alpha", 15, "a19", "biodiversity OR forest*"),
    ("Alpha", 16, "a20", "violence AND NOT (coral OR marine)"),
    ("Alpha", 17, "a21", "keywords:(partnership OR cooperation)"),
    ("Beta", 1, "b01", "poverty AND NOT (cell OR tumor)"),
    ("Beta", 1, "b02", "microfinance OR welfare"),
    ("Beta", 2, "b03", "food AND (crop* OR agricultur*)"),
    ("Beta", 3, "b04", "health OR hospital* OR patients"),
    ("Beta", 4, "b05", r#"literacy OR "learning" W/4 students"#),
    ("Beta", 5, "b06", "gender OR girls"),
    ("Beta", 6, "b07", "water NEAR/3 clean"),
    ("Beta", 7, "b08", "solar OR wind W/2 energy"),
    ("Beta", 8, "b09", "labour OR workers"),
    ("Beta", 10, "b10", r#""wealth gap" OR income W/3 gap"#),
    ("Beta", 10, "b11", "discrimination OR racial"),
    ("Beta", 11, "b12", "cities OR slum*"),
    ("Beta", 12, "b13", r#"recycl* OR "circular" NEAR/4 production"#),
    ("Beta", 13, "b14", "carbon NEAR/2 emission"),
    ("Beta", 15, "b15", "abstract:(land AND soil)"),
    ("Beta", 16, "b16", "justice OR corruption"),
    ("Beta", 17, "b17", "trade AND development"),
    ("Gamma", 1, "g01", "title:poverty OR keywords:income"),
    ("Gamma", 3, "g02", "disease AND NOT (forest OR species)"),
    ("Gamma", 3, "g03", "cancer OR tumor* OR lncrna"),
    ("Gamma", 5, "g04", "female OR women"),
    ("Gamma", 7, "g05", "energy AND NOT climate"),
    ("Gamma", 10, "g06", "migrat* AND (cell OR racial OR gender)"),
    ("Gamma", 10, "g07", "migrants OR inequality"),
    ("Gamma", 12, "g08", "consumption OR waste*"),
    ("Gamma", 13, "g09", "climate OR warming"),
    ("Gamma", 14, "g10", "ocean* OR coastal"),
];

pub fn fixture_systems_csv() -> String {
    systems_csv(
        FIXTURE_QUERIES
            .iter()
            .map(|&(s, g, id, q)| (s.to_string(), g, id.to_string(), q.to_string())),
    )
}

/// Six systems with one query per SDG each.
pub fn six_systems_csv() -> String {
    let mut rows = Vec::new();
    for s in 0..6 {
        for (g, theme) in THEMES.iter().take(17).enumerate() {
            let a = theme[s % theme.len()];
            let b = theme[(s + 1) % theme.len()];
            let query = match s {
                0 => a.to_string(),
                1 => format!("{a} OR {b}"),
                2 => format!("{a} AND {b}"),
                3 => format!("{a} NEAR/5 {b}"),
                4 => format!("title:{a} OR keywords:{b}"),
                _ => format!("\"{a} {b}\" OR {b}"),
            };
            rows.push((format!("S{}", s + 1), g as u8 + 1, format!("q{:02}", g + 1), query));
        }
    }
    systems_csv(rows)
}

/// `n` random valid queries over the theme vocabulary, spread over SDGs and
/// three systems, in systems-CSV form.
pub fn random_systems_csv(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for i in 0..n {
        let theme = rng.gen_range(0..17);
        let vocab = THEMES[theme];
        let mut pick = || *vocab.choose(&mut rng).unwrap();
        let (a, b, c) = (pick(), pick(), pick());
        let query = match i % 8 {
            0 => format!("{a} OR {b}"),
            1 => format!("{a} AND {b}"),
            2 => format!("{}* OR {b}", &a[..a.len().min(4)]),
            3 => format!("{a} NEAR/4 {b}"),
            4 => format!("{a} W/3 {b}"),
            5 => format!("{a} AND NOT {c}"),
            6 => format!("title:{a} OR abstract:({b} AND {c})"),
            _ => format!("\"{a} {b}\" OR {c}"),
        };
        rows.push((format!("R{}", i % 3 + 1), theme as u8 + 1, format!("r{i:04}"), query));
    }
    systems_csv(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::read_systems;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(corpus(20, 30, 7), corpus(20, 30, 7));
        assert_ne!(corpus(20, 30, 7), corpus(20, 30, 8));
        assert_eq!(random_systems_csv(50, 1), random_systems_csv(50, 1));
    }

    #[test]
    fn generated_systems_parse() {
        let fixture = read_systems(fixture_systems_csv().as_bytes()).unwrap();
        assert_eq!(fixture.len(), 3);
        assert!(fixture.iter().map(|s| s.entries.len()).sum::<usize>() >= 40);
        let random = read_systems(random_systems_csv(200, 3).as_bytes()).unwrap();
        assert_eq!(random.iter().map(|s| s.entries.len()).sum::<usize>(), 200);
        let six = read_systems(six_systems_csv().as_bytes()).unwrap();
        assert_eq!(six.len(), 6);
    }
}
