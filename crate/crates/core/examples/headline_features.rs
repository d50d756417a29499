//! Prints the ambiguity features and both misleading-task views for one
//! synthetic document.

use headcheck::corpus::{LexiconSet, Task};
use headcheck::csr::{mine, MiningConfig};
use headcheck::encoder::{ItemInventory, SequenceDatabase};
use headcheck::features::{ambiguous_vector, FeatureVector};
use headcheck::pipeline::MisleadingFeaturizer;
use headcheck::synth::{corpus, embeddings, SynthConfig};

fn show(title: &str, fv: &FeatureVector) {
    println!("{title} ({} features)", fv.len());
    for (name, value) in fv.iter() {
        println!("  {name:<40} {value:.4}");
    }
}

fn main() -> headcheck::Result<()> {
    let lex = LexiconSet::builtin();
    let inventory = ItemInventory::default_for(&lex);
    let docs = corpus(&SynthConfig::default());
    let emb = embeddings(&docs, 32, 7);

    let db = SequenceDatabase::from_documents(&docs, &inventory, Task::Ambiguous)?;
    let rules = mine(&db, &MiningConfig::new(0.1, 0.9, 4)?)?;

    let doc = docs
        .iter()
        .find(|d| d.label_ambiguous == Some(true) && d.label_misleading == Some(true))
        .unwrap_or(&docs[0]);
    println!("headline: {}", doc.headline.join(" "));

    show(
        "ambiguity",
        &ambiguous_vector(doc, &lex, &inventory, &rules),
    );
    let (pair, degraded) = MisleadingFeaturizer::fit(&docs).views(doc, &lex, &emb);
    show("headline view", &pair.head);
    show("body view", &pair.body);
    if degraded.any() {
        println!("degraded: {degraded:?}");
    }
    Ok(())
}
