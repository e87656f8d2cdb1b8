mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use sdglens_core::analytics::{cosine, diversity, TopicDistribution, TopicSimilarity};
use sdglens_core::cooccur::build_network;
use sdglens_core::corpus::{tokenize, Corpus, Document, Field};
use sdglens_core::matcher::Evaluation;
use sdglens_core::query::{parse_query, Query, QueryEntry, Scope, SystemDef};
use sdglens_core::{label_corpus, Engine, Sdg};

use common::{label_set, naive_labels, Naive};

const VOCAB: &[&str] = &[
    "poverty", "income", "gap", "food", "water", "clean", "rna", "cell", "wealth",
];
const STEMS: &[&str] = &["pov", "inco", "wat", "cel", "wea", "foo"];

fn word() -> impl Strategy<Value = String> {
    prop::sample::select(VOCAB).prop_map(String::from)
}

fn leaf() -> BoxedStrategy<Query> {
    prop_oneof![
        3 => word().prop_map(|w| Query::Term { text: w, wildcard: false }),
        1 => prop::sample::select(STEMS).prop_map(|s| Query::Term { text: s.into(), wildcard: true }),
        1 => prop::collection::vec(word(), 1..4).prop_map(Query::Phrase),
    ]
    .boxed()
}

fn scope() -> impl Strategy<Value = Scope> {
    prop_oneof![
        Just(Scope::Any),
        Just(Scope::Only(Field::Title)),
        Just(Scope::Only(Field::Abstract)),
        Just(Scope::Only(Field::Keywords)),
    ]
}

/// Random ASTs satisfying the grammar's invariants.
fn query() -> impl Strategy<Value = Query> {
    leaf().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (leaf(), leaf(), 1u32..6, any::<bool>()).prop_map(|(l, r, window, ordered)| Query::Near {
                left: Box::new(l),
                right: Box::new(r),
                window,
                ordered,
            }),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Query::Or),
            (
                inner.clone(),
                prop::collection::vec((inner.clone(), any::<bool>()), 1..3)
            )
                .prop_map(|(first, rest)| {
                    let mut children = vec![first];
                    children.extend(
                        rest.into_iter()
                            .map(|(q, neg)| if neg { Query::Not(Box::new(q)) } else { q }),
                    );
                    Query::And(children)
                }),
            (scope(), inner).prop_map(|(scope, child)| Query::Scoped {
                scope,
                child: Box::new(child)
            }),
        ]
    })
}

fn text(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![4 => word(), 1 => Just("the".to_string()), 1 => Just("migration".to_string())],
        0..max,
    )
    .prop_map(|ws| ws.join(" "))
}

fn documents() -> impl Strategy<Value = Vec<Document>> {
    prop::collection::vec((text(8), text(20), prop::collection::vec(text(3), 0..3)), 1..8).prop_map(|docs| {
        docs.into_iter()
            .enumerate()
            .map(|(i, (t, a, k))| Document {
                id: format!("d{i}"),
                title: t,
                abstract_text: a,
                keywords: k,
                year: 2019,
                topic_micro: None,
                topic: None,
            })
            .collect()
    })
}

fn system(name: &str, queries: Vec<Query>) -> SystemDef {
    SystemDef {
        name: name.into(),
        entries: queries
            .into_iter()
            .enumerate()
            .map(|(i, query)| QueryEntry {
                sdg: Sdg::new((i % 17) as u8 + 1).unwrap(),
                query_id: format!("q{i}"),
                query,
            })
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn tokenize_idempotent(s in "\\PC{0,40}") {
        let once = tokenize(&s);
        prop_assert_eq!(tokenize(&once.join(" ")), once);
    }

    #[test]
    fn tokenize_idempotent_ascii(s in "[ -~]{0,60}") {
        let once = tokenize(&s);
        prop_assert_eq!(tokenize(&once.join(" ")), once);
    }

    #[test]
    fn query_print_parse_round_trip(q in query()) {
        prop_assert_eq!(q.validate(), Ok(()));
        let printed = q.to_string();
        let parsed = parse_query(&printed);
        prop_assert_eq!(parsed.as_ref(), Ok(&q), "printed: {}", printed);
    }

    #[test]
    fn literals_come_from_the_source(q in query()) {
        let source = q.to_string();
        let tokens: BTreeSet<String> = tokenize(&source).into_iter().collect();
        let lits = q.literals();
        for l in lits.positive.iter().chain(&lits.negative) {
            prop_assert!(tokens.contains(&l.stem), "{} not in {}", l.stem, source);
        }
        let unique: BTreeSet<_> = lits.positive.iter().collect();
        prop_assert_eq!(unique.len(), lits.positive.len());
    }

    #[test]
    fn prefilter_is_sound(docs in documents(), queries in prop::collection::vec(query(), 1..12)) {
        let corpus = Corpus::from_documents(docs).unwrap();
        let systems = vec![system("S", queries)];
        let engine = Engine::build(&systems).unwrap();
        for d in corpus.docs() {
            let pre = engine.match_document_with(d, Evaluation::Prefiltered);
            let all = engine.match_document_with(d, Evaluation::Exhaustive);
            prop_assert_eq!(&pre, &all);
            let naive = Naive::new(d);
            let expected: Vec<&str> = systems[0]
                .entries
                .iter()
                .filter(|e| naive.eval(&e.query))
                .map(|e| e.query_id.as_str())
                .collect();
            let got: Vec<&str> = all.iter().map(|t| t.query_id.as_str()).collect();
            prop_assert_eq!(got, expected);
            for t in &all {
                prop_assert!(!t.hits.is_empty());
                let streams = d.token_streams();
                for h in &t.hits {
                    let stream = &streams[h.field.index()];
                    let tok = stream.tokens.iter().find(|tk| tk.position == h.position);
                    prop_assert!(tok.is_some_and(|tk| h.literal.matches(&tk.text)));
                }
            }
        }
    }

    #[test]
    fn adding_a_document_keeps_labels(docs in documents(), extra in (text(8), text(20)), queries in prop::collection::vec(query(), 1..8)) {
        let engine = Engine::build(&[system("S", queries.clone())]).unwrap();
        let base = Corpus::from_documents(docs.clone()).unwrap();
        let mut more = docs;
        more.push(Document {
            id: "extra".into(),
            title: extra.0,
            abstract_text: extra.1 + " filler",
            keywords: vec![],
            year: 2019,
            topic_micro: None,
            topic: None,
        });
        let bigger = Corpus::from_documents(more).unwrap();
        let a = label_set(&label_corpus(&engine, &base, 1).unwrap());
        let b = label_set(&label_corpus(&engine, &bigger, 1).unwrap());
        prop_assert!(a.is_subset(&b));
        prop_assert_eq!(b, naive_labels(&bigger, &[system("S", queries)]));
    }

    #[test]
    fn corpus_jsonl_and_csv_round_trip(
        docs in prop::collection::vec(("[a-zA-Z ,\"é-]{1,30}", "\\PC{0,40}", prop::collection::vec("[a-z][a-z ]{0,10}[a-z]", 0..4), 1900i32..2100), 1..6)
    ) {
        let docs: Vec<Document> = docs
            .into_iter()
            .enumerate()
            .map(|(i, (t, a, k, y))| Document {
                id: format!("id,{i}"),
                title: format!("t{t}"),
                abstract_text: a,
                keywords: k,
                year: y,
                topic_micro: (i % 2 == 0).then(|| format!("m{i}")),
                topic: None,
            })
            .collect();
        let corpus = Corpus::from_documents(docs.clone()).unwrap();
        let mut buf = Vec::new();
        corpus.write_jsonl(&mut buf).unwrap();
        let back = Corpus::read_jsonl(&buf[..]).unwrap();
        prop_assert_eq!(back.docs(), &docs[..]);
        let mut buf = Vec::new();
        corpus.write_csv(&mut buf).unwrap();
        let back = Corpus::read_csv(&buf[..]).unwrap();
        prop_assert_eq!(back.docs(), &docs[..]);
    }

    #[test]
    fn cosine_symmetric_and_scale_invariant(
        u in prop::collection::vec(0.0f64..100.0, 1..12),
        seed in prop::collection::vec(0.0f64..100.0, 12),
    ) {
        let v = &seed[..u.len()];
        let uv = cosine(&u, v).unwrap();
        let vu = cosine(v, &u).unwrap();
        prop_assert_eq!(uv, vu);
        for c in [0.5, 3.0] {
            let cu: Vec<f64> = u.iter().map(|x| x * c).collect();
            let scaled = cosine(&cu, v).unwrap();
            match (uv, scaled) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
                (a, b) => prop_assert_eq!(a, b),
            }
        }
        if let Some(x) = uv {
            prop_assert!((0.0..=1.0).contains(&x));
        }
    }

    #[test]
    fn identity_diversity_bounds(weights in prop::collection::vec(0u32..20, 1..15)) {
        prop_assume!(weights.iter().any(|&w| w > 0));
        let total: u32 = weights.iter().sum();
        let p = weights.iter().enumerate().map(|(i, &w)| (format!("T{i:02}"), w as f64 / total as f64)).collect();
        let dist = TopicDistribution { system: "S".into(), sdg: Sdg::new(1).unwrap(), p, support_docs: total as u64 };
        let s = TopicSimilarity::identity((0..weights.len()).map(|i| format!("T{i:02}")));
        let d = diversity(&dist, &s).unwrap();
        let support = weights.iter().filter(|&&w| w > 0).count() as f64;
        prop_assert!(d.d >= 1.0 - 1e-12 && d.d <= support + 1e-9, "D={} support={}", d.d, support);
        prop_assert!(d.shannon >= 0.0);
    }

    #[test]
    fn network_threshold_and_order(docs in prop::collection::vec(prop::collection::btree_set(0usize..6, 1..5), 1..30), min in 1u64..6) {
        let words = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"];
        let make = |order: &[usize]| {
            let ds: Vec<Document> = order
                .iter()
                .map(|&i| common::doc(&format!("d{i:03}"), &docs[i].iter().map(|&w| words[w]).collect::<Vec<_>>().join(" "), "", &[]))
                .collect();
            Corpus::from_documents(ds).unwrap()
        };
        let sys = SystemDef::new("S").with_query(1, "q", "alpha OR beta OR gamma OR delta OR epsilon OR zeta").unwrap();
        let engine = Engine::build(&[sys]).unwrap();
        let forward: Vec<usize> = (0..docs.len()).collect();
        let backward: Vec<usize> = forward.iter().rev().copied().collect();
        let sdg = Sdg::new(1).unwrap();
        let c1 = make(&forward);
        let c2 = make(&backward);
        let l1 = label_corpus(&engine, &c1, 1).unwrap();
        let l2 = label_corpus(&engine, &c2, 3).unwrap();
        let n1 = build_network(&l1, &c1, "S", sdg, min, None).unwrap();
        let n2 = build_network(&l2, &c2, "S", sdg, min, None).unwrap();
        prop_assert_eq!(&n1, &n2);
        let higher = build_network(&l1, &c1, "S", sdg, min + 1, None).unwrap();
        let labels: BTreeSet<_> = n1.nodes.iter().map(|n| &n.label).collect();
        for n in &higher.nodes {
            prop_assert!(labels.contains(&n.label));
        }
        for e in &higher.edges {
            prop_assert!(n1.edges.contains(e));
        }
        for e in &n1.edges {
            prop_assert!(e.a < e.b && e.weight >= min);
            let ca = n1.nodes.iter().find(|n| n.label == e.a).unwrap().count;
            let cb = n1.nodes.iter().find(|n| n.label == e.b).unwrap().count;
            prop_assert!(e.weight <= ca.min(cb));
        }
    }
}

#[test]
fn off_diagonal_similarity_lowers_diversity() {
    for k in [2usize, 5, 10] {
        let keys: Vec<String> = (0..k).map(|i| format!("T{i}")).collect();
        let p = keys.iter().map(|t| (t.clone(), 1.0 / k as f64)).collect();
        let dist = TopicDistribution {
            system: "S".into(),
            sdg: Sdg::new(1).unwrap(),
            p,
            support_docs: k as u64,
        };
        let mut last = f64::INFINITY;
        for step in 0..=10 {
            let s = step as f64 / 10.0;
            let pairs: Vec<_> = keys
                .iter()
                .enumerate()
                .flat_map(|(i, a)| keys[i + 1..].iter().map(move |b| (a.clone(), b.clone(), s)))
                .collect();
            let d = diversity(&dist, &TopicSimilarity::from_pairs(keys.clone(), &pairs).unwrap())
                .unwrap()
                .d;
            assert!(d <= last + 1e-12, "k={k} s={s}: {d} > {last}");
            last = d;
        }
    }
}
