//! Class sequential rule mining.
//!
//! A rule `X -> y` pairs a label pattern with a class. An entry *covers* the
//! rule when `X` is a subsequence of its label sequence and *satisfies* it
//! when it also carries class `y`. Support is the satisfying fraction of the
//! whole database; confidence is the satisfying fraction of the covering
//! entries. Occurrences are counted once per entry.
//!
//! [`mine`] enumerates patterns by prefix growth over projected databases,
//! pruning a branch as soon as no class can still reach the minimum support.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::encoder::{Class, SequenceDatabase};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSequentialRule {
    pub pattern: Vec<String>,
    pub class: Class,
    pub support: f64,
    pub confidence: f64,
}

/// Which classes' rules to keep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleClasses {
    #[default]
    Both,
    PositiveOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiningConfig {
    pub minsup: f64,
    pub minconf: f64,
    pub max_pattern_length: usize,
    #[serde(default)]
    pub classes: RuleClasses,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            minsup: 0.02,
            minconf: 0.8,
            max_pattern_length: 5,
            classes: RuleClasses::Both,
        }
    }
}

impl MiningConfig {
    pub fn new(minsup: f64, minconf: f64, max_pattern_length: usize) -> Result<Self> {
        let cfg = MiningConfig {
            minsup,
            minconf,
            max_pattern_length,
            classes: RuleClasses::Both,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| v > 0.0 && v <= 1.0;
        if !in_unit(self.minsup) {
            return Err(Error::InvalidConfig(format!(
                "minsup {} outside (0, 1]",
                self.minsup
            )));
        }
        if !in_unit(self.minconf) {
            return Err(Error::InvalidConfig(format!(
                "minconf {} outside (0, 1]",
                self.minconf
            )));
        }
        if self.max_pattern_length == 0 {
            return Err(Error::InvalidConfig(
                "max_pattern_length must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn counts<S: PartialEq<String>>(
    db: &SequenceDatabase,
    pattern: &[S],
    class: Class,
) -> (usize, usize) {
    let mut cover = 0;
    let mut satisfy = 0;
    for (seq, y) in &db.entries {
        let mut rest = seq.items.iter();
        if pattern.iter().all(|p| rest.any(|item| p == item)) {
            cover += 1;
            if *y == class {
                satisfy += 1;
            }
        }
    }
    (cover, satisfy)
}

/// Fraction of entries that satisfy `pattern -> class`.
pub fn support<S: PartialEq<String>>(
    db: &SequenceDatabase,
    pattern: &[S],
    class: Class,
) -> Result<f64> {
    if db.is_empty() {
        return Err(Error::EmptyInput("sequence database".into()));
    }
    let (_, satisfy) = counts(db, pattern, class);
    Ok(satisfy as f64 / db.len() as f64)
}

/// Fraction of covering entries that satisfy `pattern -> class`. No
/// coverage is an error, distinct from a confidence of zero.
pub fn confidence<S: PartialEq<String>>(
    db: &SequenceDatabase,
    pattern: &[S],
    class: Class,
) -> Result<f64> {
    let (cover, satisfy) = counts(db, pattern, class);
    if cover == 0 {
        return Err(Error::ZeroCoverage);
    }
    Ok(satisfy as f64 / cover as f64)
}

/// Descending support, descending confidence, then pattern, then class.
pub fn rule_order(a: &ClassSequentialRule, b: &ClassSequentialRule) -> Ordering {
    b.support
        .total_cmp(&a.support)
        .then_with(|| b.confidence.total_cmp(&a.confidence))
        .then_with(|| a.pattern.cmp(&b.pattern))
        .then_with(|| a.class.cmp(&b.class))
}

/// An entry of a projected database: the sequence index and the position
/// just past the leftmost embedding of the current prefix.
type Projection = (usize, usize);

struct Miner<'a> {
    seqs: Vec<Vec<u32>>,
    classes: Vec<Class>,
    alphabet: Vec<&'a str>,
    n: f64,
    cfg: MiningConfig,
    out: Vec<ClassSequentialRule>,
}

impl Miner<'_> {
    fn meets_minsup(&self, count: usize) -> bool {
        count as f64 / self.n >= self.cfg.minsup
    }

    fn grow(&mut self, prefix: &mut Vec<u32>, projected: &[Projection]) {
        if prefix.len() == self.cfg.max_pattern_length {
            return;
        }
        // Leftmost next occurrence of every item in every projected suffix.
        let mut next: BTreeMap<u32, Vec<Projection>> = BTreeMap::new();
        for &(s, start) in projected {
            for (offset, &item) in self.seqs[s][start..].iter().enumerate() {
                let bucket = next.entry(item).or_default();
                if bucket.last().is_none_or(|&(last, _)| last != s) {
                    bucket.push((s, start + offset + 1));
                }
            }
        }
        for (item, child) in next {
            let cover = child.len();
            debug_assert!(
                cover <= projected.len(),
                "coverage must not grow with the pattern"
            );
            let positive = child
                .iter()
                .filter(|&&(s, _)| self.classes[s] == Class::Positive)
                .count();
            let per_class = [
                (Class::Positive, positive),
                (Class::Negative, cover - positive),
            ];
            if !per_class.iter().any(|&(_, c)| self.meets_minsup(c)) {
                // Satisfying counts only shrink as the pattern grows.
                continue;
            }
            prefix.push(item);
            for (class, satisfy) in per_class {
                if self.cfg.classes == RuleClasses::PositiveOnly && class != Class::Positive {
                    continue;
                }
                let support = satisfy as f64 / self.n;
                let confidence = satisfy as f64 / cover as f64;
                if support >= self.cfg.minsup && confidence >= self.cfg.minconf {
                    self.out.push(ClassSequentialRule {
                        pattern: prefix
                            .iter()
                            .map(|&i| self.alphabet[i as usize].to_owned())
                            .collect(),
                        class,
                        support,
                        confidence,
                    });
                }
            }
            self.grow(prefix, &child);
            prefix.pop();
        }
    }
}

/// All rules with support >= minsup, confidence >= minconf, and pattern
/// length in `1..=max_pattern_length`, sorted by [`rule_order`].
pub fn mine(db: &SequenceDatabase, cfg: &MiningConfig) -> Result<Vec<ClassSequentialRule>> {
    cfg.validate()?;
    if db.is_empty() {
        return Err(Error::EmptyInput("sequence database".into()));
    }
    // Interning in sorted label order keeps item ids lexicographic.
    let mut alphabet: Vec<&str> = db
        .entries
        .iter()
        .flat_map(|(s, _)| s.items.iter().map(String::as_str))
        .collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    let id_of = |label: &str| alphabet.binary_search(&label).expect("interned") as u32;
    let seqs = db
        .entries
        .iter()
        .map(|(s, _)| s.items.iter().map(|l| id_of(l)).collect())
        .collect();
    let mut miner = Miner {
        seqs,
        classes: db.entries.iter().map(|(_, y)| *y).collect(),
        alphabet: alphabet.clone(),
        n: db.len() as f64,
        cfg: *cfg,
        out: Vec::new(),
    };
    let root: Vec<Projection> = (0..db.len()).map(|s| (s, 0)).collect();
    miner.grow(&mut Vec::new(), &root);
    let mut rules = miner.out;
    rules.sort_by(rule_order);
    Ok(rules)
}

/// Binary indicator per rule: 1 when the rule's pattern embeds in `items`.
pub fn csr_features<S>(items: &[S], rules: &[ClassSequentialRule]) -> Vec<f64>
where
    String: PartialEq<S>,
{
    rules
        .iter()
        .map(|r| {
            if is_subsequence_mixed(&r.pattern, items) {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

fn is_subsequence_mixed<S>(pattern: &[String], items: &[S]) -> bool
where
    String: PartialEq<S>,
{
    let mut rest = items.iter();
    pattern.iter().all(|p| rest.any(|x| p == x))
}

/// Display form of a pattern, e.g. `<Ref, Past>`.
pub fn format_pattern(pattern: &[String]) -> String {
    format!("<{}>", pattern.join(", "))
}

pub fn write_rules<W: Write>(rules: &[ClassSequentialRule], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, rules).map_err(|e| Error::json("writing rules", e))
}

pub fn read_rules<R: Read>(r: R) -> Result<Vec<ClassSequentialRule>> {
    serde_json::from_reader(r).map_err(|e| Error::json("reading rules", e))
}

/// Checks that `rules` lists patterns the way [`mine`] would have: sorted,
/// and the same pattern never paired twice with one class.
pub fn is_canonical(rules: &[ClassSequentialRule]) -> bool {
    rules
        .windows(2)
        .all(|w| rule_order(&w[0], &w[1]) == Ordering::Less)
        && rules.iter().all(|r| !r.pattern.is_empty())
}
