//! Writes a synthetic corpus and matching embeddings for trying the CLI.
//!
//! cargo run --example synthetic_corpus -- OUT_DIR [DOCUMENTS] [UNLABELED_FRACTION]

use std::fs::{self, File};
use std::path::PathBuf;

use headcheck::corpus::write_corpus;
use headcheck::synth::{corpus, embeddings, SynthConfig};

fn main() -> headcheck::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "synthetic".into()));
    let documents = args
        .next()
        .map_or(400, |s| s.parse().expect("document count"));
    let unlabeled_fraction = args
        .next()
        .map_or(0.0, |s| s.parse().expect("fraction in [0, 1]"));
    let cfg = SynthConfig {
        documents,
        unlabeled_fraction,
        label_noise: 0.05,
        ..SynthConfig::default()
    };

    fs::create_dir_all(&out).expect("output directory");
    let docs = corpus(&cfg);
    write_corpus(
        &docs,
        File::create(out.join("corpus.jsonl")).expect("corpus file"),
    )?;
    embeddings(&docs, 32, cfg.seed)
        .write(File::create(out.join("embeddings.txt")).expect("embeddings file"))?;

    let ambiguous = docs
        .iter()
        .filter(|d| d.label_ambiguous == Some(true))
        .count();
    let misleading = docs
        .iter()
        .filter(|d| d.label_misleading == Some(true))
        .count();
    let unlabeled = docs.iter().filter(|d| d.label_misleading.is_none()).count();
    println!("wrote {} documents to {}", docs.len(), out.display());
    println!(
        "ambiguous {ambiguous}, misleading {misleading}, without misleading label {unlabeled}"
    );
    Ok(())
}
