//! Shared helpers for integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use headcheck::csr::{rule_order, ClassSequentialRule, MiningConfig, RuleClasses};
use headcheck::encoder::{Class, LabelSequence, SequenceDatabase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every distinct subsequence of `seq` up to `max_len` items, by bitmask.
fn subsequences(seq: &[String], max_len: usize) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << seq.len()) {
        if mask.count_ones() as usize <= max_len {
            out.insert(
                (0..seq.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| seq[i].clone())
                    .collect(),
            );
        }
    }
    out
}

fn embeds(pattern: &[String], seq: &[String]) -> bool {
    let mut j = 0;
    for item in seq {
        if j < pattern.len() && *item == pattern[j] {
            j += 1;
        }
    }
    j == pattern.len()
}

/// Brute-force rule enumeration: every pattern occurring in the database,
/// scored directly from the cover/satisfy definitions.
pub fn brute_force_rules(db: &SequenceDatabase, cfg: &MiningConfig) -> Vec<ClassSequentialRule> {
    let candidates: BTreeSet<Vec<String>> = db
        .entries
        .iter()
        .flat_map(|(s, _)| subsequences(&s.items, cfg.max_pattern_length))
        .collect();
    let n = db.len();
    let mut rules = Vec::new();
    for pattern in candidates {
        let covering: Vec<Class> = db
            .entries
            .iter()
            .filter(|(s, _)| embeds(&pattern, &s.items))
            .map(|(_, c)| *c)
            .collect();
        for class in Class::BOTH {
            if cfg.classes == RuleClasses::PositiveOnly && class != Class::Positive {
                continue;
            }
            let satisfy = covering.iter().filter(|&&c| c == class).count();
            let support = satisfy as f64 / n as f64;
            let confidence = satisfy as f64 / covering.len() as f64;
            if support >= cfg.minsup && confidence >= cfg.minconf {
                rules.push(ClassSequentialRule {
                    pattern: pattern.clone(),
                    class,
                    support,
                    confidence,
                });
            }
        }
    }
    rules.sort_by(rule_order);
    rules
}

/// Random database with at most `max_entries` sequences of length at most
/// `max_len` over an alphabet of single-digit labels.
pub fn random_db(
    rng: &mut ChaCha8Rng,
    max_entries: usize,
    max_len: usize,
    alphabet: usize,
) -> SequenceDatabase {
    let mut db = SequenceDatabase::default();
    for i in 0..rng.gen_range(1..=max_entries) {
        let items = (0..rng.gen_range(0..=max_len))
            .map(|_| rng.gen_range(0..alphabet).to_string())
            .collect();
        db.push(
            LabelSequence::new(i.to_string(), items),
            Class::from(rng.gen_bool(0.5)),
        );
    }
    db
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The five-sequence worked example; `c1` is the positive class.
pub fn example_db() -> SequenceDatabase {
    let rows: [(&[u32], bool); 5] = [
        (&[1, 4, 5, 6, 7], true),
        (&[1, 4, 6, 7, 9], true),
        (&[1, 6, 7], true),
        (&[2, 6, 7], false),
        (&[1, 3, 4, 7], false),
    ];
    let mut db = SequenceDatabase::default();
    for (i, (items, y)) in rows.into_iter().enumerate() {
        db.push(
            LabelSequence::new(
                (i + 1).to_string(),
                items.iter().map(u32::to_string).collect(),
            ),
            Class::from(y),
        );
    }
    db
}

pub fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Writes a synthetic corpus and matching embeddings under `dir`, returning
/// their paths.
pub fn write_fixture(
    dir: &std::path::Path,
    cfg: &headcheck::synth::SynthConfig,
) -> (std::path::PathBuf, std::path::PathBuf) {
    let docs = headcheck::synth::corpus(cfg);
    let corpus = dir.join("corpus.jsonl");
    headcheck::corpus::write_corpus(&docs, std::fs::File::create(&corpus).unwrap()).unwrap();
    let emb = dir.join("embeddings.txt");
    headcheck::synth::embeddings(&docs, 16, cfg.seed)
        .write(std::fs::File::create(&emb).unwrap())
        .unwrap();
    (corpus, emb)
}

/// Runs the command-line binary, returning exit code, stdout and stderr.
pub fn run_cli<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_headcheck"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}
