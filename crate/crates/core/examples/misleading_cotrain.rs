//! Co-trains headline and body views of the misleading detector, printing
//! each iteration's bookkeeping, then compares against a gold-only model.

use headcheck::classifier::TrainConfig;
use headcheck::corpus::LexiconSet;
use headcheck::cotrain::{evaluate_views, CoTrainConfig, CoTrainer, ViewPair};
use headcheck::pipeline::MisleadingFeaturizer;
use headcheck::synth::{corpus, embeddings, SynthConfig};

fn main() -> headcheck::Result<()> {
    let lex = LexiconSet::builtin();
    let docs = corpus(&SynthConfig {
        documents: 1200,
        unlabeled_fraction: 0.75,
        label_noise: 0.1,
        ..SynthConfig::default()
    });
    let emb = embeddings(&docs, 32, 7);
    let featurizer = MisleadingFeaturizer::fit(&docs);

    // Hold out a quarter of the labeled documents for testing.
    let (mut gold, mut test, mut pool) = (Vec::new(), Vec::new(), Vec::<ViewPair>::new());
    for (i, doc) in docs.iter().enumerate() {
        let pair = featurizer.views(doc, &lex, &emb).0;
        match doc.label_misleading {
            Some(y) if i % 4 == 0 => test.push((pair, y)),
            Some(y) => gold.push((pair, y)),
            None => pool.push(pair),
        }
    }
    println!(
        "gold {}, pool {}, test {}",
        gold.len(),
        pool.len(),
        test.len()
    );

    let cfg = CoTrainConfig {
        p: 5,
        n: 10,
        iterations: 20,
    };
    let mut trainer = CoTrainer::new(gold, pool, cfg, TrainConfig::default())?;
    let baseline = {
        let (h, b) = trainer.models();
        evaluate_views(h, b, &test)?
    };
    println!("iter  +H(pos/neg)  +B(pos/neg)  agree  conflict      L      U");
    while let Some(r) = trainer.step()? {
        println!(
            "{:>4}  {:>5}/{:<5}  {:>5}/{:<5}  {:>5}  {:>8}  {:>5}  {:>5}",
            r.iteration,
            r.promoted_h_pos,
            r.promoted_h_neg,
            r.promoted_b_pos,
            r.promoted_b_neg,
            r.agreements,
            r.conflicts,
            r.l_size,
            r.u_size
        );
    }
    let (h, b) = trainer.models();
    let cotrained = evaluate_views(h, b, &test)?;
    println!("gold only   F {:.4}", baseline.f_score);
    println!("co-trained  F {:.4}", cotrained.f_score);
    Ok(())
}
