//! Mines class sequential rules, first from a hand-made database and then
//! from encoded headlines of a synthetic corpus.

use headcheck::corpus::{LexiconSet, Task};
use headcheck::csr::{format_pattern, mine, MiningConfig};
use headcheck::encoder::{Class, ItemInventory, LabelSequence, SequenceDatabase};
use headcheck::synth::{corpus, SynthConfig};

fn main() -> headcheck::Result<()> {
    let rows: [(&[&str], bool); 5] = [
        (&["1", "4", "5", "6", "7"], true),
        (&["1", "4", "6", "7", "9"], true),
        (&["1", "6", "7"], true),
        (&["2", "6", "7"], false),
        (&["1", "3", "4", "7"], false),
    ];
    let mut db = SequenceDatabase::default();
    for (i, (items, positive)) in rows.into_iter().enumerate() {
        let items = items.iter().map(|s| s.to_string()).collect();
        db.push(
            LabelSequence::new(format!("s{i}"), items),
            Class::from(positive),
        );
    }
    println!("toy database, minsup 0.2, minconf 0.6");
    for r in mine(&db, &MiningConfig::new(0.2, 0.6, 5)?)? {
        println!(
            "  {} => {:?}  sup {:.2} conf {:.2}",
            format_pattern(&r.pattern),
            r.class,
            r.support,
            r.confidence
        );
    }

    let lex = LexiconSet::builtin();
    let inventory = ItemInventory::default_for(&lex);
    let docs = corpus(&SynthConfig::default());
    let headlines = SequenceDatabase::from_documents(&docs, &inventory, Task::Ambiguous)?;
    let rules = mine(&headlines, &MiningConfig::new(0.05, 0.9, 4)?)?;
    println!(
        "\n{} rules from {} synthetic headlines; strongest ten:",
        rules.len(),
        headlines.len()
    );
    for r in rules.iter().take(10) {
        println!(
            "  {} => {:?}  sup {:.3} conf {:.3}",
            format_pattern(&r.pattern),
            r.class,
            r.support,
            r.confidence
        );
    }
    Ok(())
}
