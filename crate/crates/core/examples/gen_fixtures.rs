//! Regenerates the files under `fixtures/`.
//!
//! cargo run -p sdglens-core --example gen_fixtures -- fixtures

use std::fs;
use std::path::PathBuf;

use sdglens_core::synth;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("corpus.jsonl"), synth::fixture_corpus_jsonl())?;
    fs::write(dir.join("taxonomy.csv"), synth::taxonomy_csv())?;
    fs::write(dir.join("assignments.csv"), synth::fixture_assignments_csv())?;
    fs::write(dir.join("topic_similarity.csv"), synth::topic_similarity_csv())?;
    fs::write(dir.join("systems.csv"), synth::fixture_systems_csv())?;
    fs::write(dir.join("systems_6x17.csv"), synth::six_systems_csv())?;
    Ok(())
}
