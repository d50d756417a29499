//! Trains both detectors and tabulates their predictions by news domain.

use headcheck::classifier::TrainConfig;
use headcheck::corpus::LexiconSet;
use headcheck::csr::MiningConfig;
use headcheck::encoder::ItemInventory;
use headcheck::eval::{domain_breakdown, DomainBreakdown};
use headcheck::pipeline::{AmbiguityPipeline, MisleadingPipeline};
use headcheck::synth::{corpus, embeddings, SynthConfig};

fn main() -> headcheck::Result<()> {
    let lex = LexiconSet::builtin();
    let inventory = ItemInventory::default_for(&lex);
    let docs = corpus(&SynthConfig {
        documents: 800,
        label_noise: 0.05,
        ..SynthConfig::default()
    });
    let emb = embeddings(&docs, 32, 7);
    let tcfg = TrainConfig::default();

    let ambiguous =
        AmbiguityPipeline::fit(&docs, &lex, &inventory, &MiningConfig::default(), &tcfg)?;
    let misleading = MisleadingPipeline::fit_joint(&docs, &lex, &emb, &tcfg)?;
    let breakdown = domain_breakdown(
        &docs,
        &ambiguous.predict(&docs, &lex)?,
        &misleading.predict(&docs, &lex, &emb)?,
    )?;

    print!("{}", breakdown.to_table());
    let csv = breakdown.to_csv();
    assert_eq!(DomainBreakdown::from_csv(&csv)?, breakdown);
    print!("\n{csv}");
    Ok(())
}
