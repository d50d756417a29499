//! Trains the ambiguous-headline detector on a synthetic corpus, scores a
//! held-out split, and round-trips the model through JSON.

use headcheck::classifier::TrainConfig;
use headcheck::corpus::{split_train_test, LexiconSet, SplitRatio, Task};
use headcheck::csr::MiningConfig;
use headcheck::encoder::ItemInventory;
use headcheck::eval::precision_recall_f;
use headcheck::pipeline::{labels, load_json, save_json, AmbiguityPipeline};
use headcheck::synth::{corpus, SynthConfig};

fn main() -> headcheck::Result<()> {
    let lex = LexiconSet::builtin();
    let inventory = ItemInventory::default_for(&lex);
    let docs = corpus(&SynthConfig {
        documents: 400,
        label_noise: 0.05,
        ..SynthConfig::default()
    });
    let (train, test) = split_train_test(&docs, SplitRatio::default(), 1)?;

    let detector = AmbiguityPipeline::fit(
        &train,
        &lex,
        &inventory,
        &MiningConfig::default(),
        &TrainConfig::default(),
    )?;
    println!(
        "{} rules, {} features",
        detector.rules.len(),
        detector.model.feature_names.len()
    );

    let report = precision_recall_f(
        &detector.predict(&test, &lex)?,
        &labels(&test, Task::Ambiguous)?,
    )?;
    print!("held-out, {} documents\n{}", test.len(), report.to_text());

    let path = std::env::temp_dir().join("ambiguity_detector.json");
    save_json(&detector, &path)?;
    let reloaded: AmbiguityPipeline = load_json(&path)?;
    assert_eq!(reloaded.scores(&test, &lex)?, detector.scores(&test, &lex)?);
    println!("saved to {}", path.display());
    Ok(())
}
