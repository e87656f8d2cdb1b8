//! Labels a synthetic corpus and reports throughput.
//!
//! cargo run --release -p sdglens-core --example bench_label -- 100000

use std::time::Instant;

use sdglens_core::query::read_systems;
use sdglens_core::{label_corpus, synth, Corpus, Engine};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let docs = synth::corpus(n, 135, 42);
    let corpus = Corpus::from_documents(docs).expect("unique ids");
    let systems = read_systems(synth::random_systems_csv(200, 42).as_bytes()).expect("valid systems");
    let engine = Engine::build(&systems).expect("engine");
    let start = Instant::now();
    let labels = label_corpus(&engine, &corpus, 1).expect("labels");
    let secs = start.elapsed().as_secs_f64();
    println!(
        "{n} docs, {} queries, {} labels in {secs:.2}s ({:.0} docs/s)",
        engine.queries().len(),
        labels.len(),
        n as f64 / secs
    );
}
