//! Positive-class metrics, the exact sign test, and per-domain tallies.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Domain};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    pub positives_predicted: usize,
    pub positives_gold: usize,
    pub true_positives: usize,
    pub instances: usize,
}

impl EvalReport {
    pub fn to_text(&self) -> String {
        format!(
            "precision  {:.4}\nrecall     {:.4}\nf_score    {:.4}\npredicted  {}\ngold       {}\ncorrect    {}\ninstances  {}\n",
            self.precision,
            self.recall,
            self.f_score,
            self.positives_predicted,
            self.positives_gold,
            self.true_positives,
            self.instances
        )
    }
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    Ok(())
}

/// Harmonic mean, or 0 when both inputs are 0.
pub fn f_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

pub fn precision_recall_f(pred: &[bool], gold: &[bool]) -> Result<EvalReport> {
    check_lengths(pred.len(), gold.len())?;
    if pred.is_empty() {
        return Err(Error::EmptyInput("no predictions to evaluate".into()));
    }
    let tp = pred.iter().zip(gold).filter(|&(&p, &g)| p && g).count();
    let predicted = pred.iter().filter(|&&p| p).count();
    let positives = gold.iter().filter(|&&g| g).count();
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let (precision, recall) = (ratio(tp, predicted), ratio(tp, positives));
    Ok(EvalReport {
        precision,
        recall,
        f_score: f_score(precision, recall),
        positives_predicted: predicted,
        positives_gold: positives,
        true_positives: tp,
        instances: pred.len(),
    })
}

/// Expected precision, recall and F of a random classifier that predicts
/// positive at the gold positive rate: all three equal that rate.
pub fn prevalence_baseline(gold: &[bool]) -> f64 {
    if gold.is_empty() {
        return 0.0;
    }
    gold.iter().filter(|&&g| g).count() as f64 / gold.len() as f64
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        // Exact at every step: c * (n - i) is divisible by i + 1.
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// Two-sided exact binomial p-value for `k` successes out of `n` trials with
/// success probability 1/2.
pub fn binomial_two_sided(k: u64, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let m = k.min(n - k);
    if 2 * m == n {
        return 1.0;
    }
    let tail = if n <= 120 {
        let sum: u128 = (0..=m).map(|i| binomial_u128(n, i)).sum();
        sum as f64 / 2f64.powi(n as i32)
    } else {
        // Terms in log space relative to 2^n.
        let ln2n = n as f64 * std::f64::consts::LN_2;
        let mut ln_c = 0.0;
        let mut total = 0.0;
        for i in 0..=m {
            if i > 0 {
                ln_c += ((n - i + 1) as f64).ln() - (i as f64).ln();
            }
            total += (ln_c - ln2n).exp();
        }
        total
    };
    (2.0 * tail).min(1.0)
}

/// Per-system discordant counts: instances only A got right, only B got right.
pub fn discordant_counts(pred_a: &[bool], pred_b: &[bool], gold: &[bool]) -> Result<(u64, u64)> {
    check_lengths(pred_a.len(), gold.len())?;
    check_lengths(pred_b.len(), gold.len())?;
    let mut counts = (0, 0);
    for ((&a, &b), &g) in pred_a.iter().zip(pred_b).zip(gold) {
        match (a == g, b == g) {
            (true, false) => counts.0 += 1,
            (false, true) => counts.1 += 1,
            _ => {}
        }
    }
    Ok(counts)
}

/// Sign test on per-instance correctness; instances where both systems are
/// right or both wrong are dropped.
pub fn sign_test(pred_a: &[bool], pred_b: &[bool], gold: &[bool]) -> Result<f64> {
    let (a, b) = discordant_counts(pred_a, pred_b, gold)?;
    Ok(binomial_two_sided(a, a + b))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub accurate: usize,
    pub ambiguous_only: usize,
    pub misleading_only: usize,
    pub both: usize,
}

impl Tally {
    pub fn total(&self) -> usize {
        self.accurate + self.ambiguous_only + self.misleading_only + self.both
    }

    pub fn add(&mut self, ambiguous: bool, misleading: bool) {
        match (ambiguous, misleading) {
            (false, false) => self.accurate += 1,
            (true, false) => self.ambiguous_only += 1,
            (false, true) => self.misleading_only += 1,
            (true, true) => self.both += 1,
        }
    }
}

/// Category counts per domain, for domains that occur in the corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainBreakdown {
    pub domains: BTreeMap<Domain, Tally>,
}

const CSV_HEADER: &str = "domain,accurate,ambiguous_only,misleading_only,both,total";

impl DomainBreakdown {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for (d, t) in &self.domains {
            let _ = writeln!(
                out,
                "{d},{},{},{},{},{}",
                t.accurate,
                t.ambiguous_only,
                t.misleading_only,
                t.both,
                t.total()
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == CSV_HEADER => {}
            _ => {
                return Err(Error::Corpus {
                    line: 1,
                    message: "unexpected breakdown header".into(),
                })
            }
        }
        let mut out = DomainBreakdown::default();
        for (i, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
            let bad = |message: String| Error::Corpus {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(bad(format!("expected 6 fields, found {}", fields.len())));
            }
            let domain: Domain = fields[0].parse().map_err(bad)?;
            let mut n = [0usize; 5];
            for (slot, f) in n.iter_mut().zip(&fields[1..]) {
                *slot = f.parse().map_err(|_| bad(format!("bad count `{f}`")))?;
            }
            let tally = Tally {
                accurate: n[0],
                ambiguous_only: n[1],
                misleading_only: n[2],
                both: n[3],
            };
            if tally.total() != n[4] {
                return Err(bad("total does not match the counts".into()));
            }
            out.domains.insert(domain, tally);
        }
        Ok(out)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<14} {:>9} {:>10} {:>10} {:>6} {:>6}\n",
            "domain", "accurate", "ambiguous", "misleading", "both", "total"
        );
        for (d, t) in &self.domains {
            let _ = writeln!(
                out,
                "{:<14} {:>9} {:>10} {:>10} {:>6} {:>6}",
                d.as_str(),
                t.accurate,
                t.ambiguous_only,
                t.misleading_only,
                t.both,
                t.total()
            );
        }
        out
    }
}

/// Tallies each document's pair of predictions under its domain.
pub fn domain_breakdown(
    docs: &[Document],
    ambiguous: &[bool],
    misleading: &[bool],
) -> Result<DomainBreakdown> {
    check_lengths(docs.len(), ambiguous.len())?;
    check_lengths(docs.len(), misleading.len())?;
    let mut out = DomainBreakdown::default();
    for ((doc, &a), &m) in docs.iter().zip(ambiguous).zip(misleading) {
        out.domains.entry(doc.domain).or_default().add(a, m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_confusion_matrix() {
        // TP=3, FP=1, FN=2, TN=1.
        let pred = [true, true, true, true, false, false, false];
        let gold = [true, true, true, false, true, true, false];
        let r = precision_recall_f(&pred, &gold).unwrap();
        assert_eq!((r.precision, r.recall), (0.75, 0.6));
        assert!((r.f_score - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_reports() {
        let gold = [true, false, true];
        let r = precision_recall_f(&gold, &gold).unwrap();
        assert_eq!((r.precision, r.recall, r.f_score), (1.0, 1.0, 1.0));
        let r = precision_recall_f(&[false; 3], &gold).unwrap();
        assert_eq!((r.precision, r.recall, r.f_score), (0.0, 0.0, 0.0));
        assert!(matches!(
            precision_recall_f(&[true], &gold),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn prevalence() {
        let mut gold = vec![true; 843];
        gold.extend(vec![false; 1765]);
        assert!((prevalence_baseline(&gold) - 0.323).abs() < 5e-4);
        assert_eq!(prevalence_baseline(&[true, false]), 0.5);
        assert_eq!(prevalence_baseline(&[true; 4]), 1.0);
    }

    #[test]
    fn sign_test_worked_values() {
        assert_eq!(binomial_two_sided(8, 10), 0.109375);
        assert_eq!(binomial_two_sided(2, 10), 0.109375);
        assert_eq!(binomial_two_sided(8, 8), 0.0078125);
        assert_eq!(binomial_two_sided(0, 0), 1.0);
        let gold = [true; 5];
        let a = [true, false, true, false, true];
        assert_eq!(sign_test(&a, &a, &gold).unwrap(), 1.0);
    }

    #[test]
    fn large_n_agrees_with_exact_branch() {
        // Just above the exact cut-off, compare against the same sum in f64.
        let n = 121u64;
        let k = 45u64;
        let mut c = 1.0f64;
        let mut sum = 1.0f64;
        for i in 1..=k {
            c = c * (n - i + 1) as f64 / i as f64;
            sum += c;
        }
        let expected = 2.0 * sum / 2f64.powi(n as i32);
        assert!((binomial_two_sided(k, n) - expected).abs() < 1e-12);
    }

    #[test]
    fn sign_test_symmetric_and_monotone() {
        for n in 1..=30u64 {
            let mut prev = 0.0;
            for k in 0..=n / 2 {
                let p = binomial_two_sided(k, n);
                assert_eq!(p, binomial_two_sided(n - k, n));
                assert!(p > 0.0 && p <= 1.0 && p >= prev);
                prev = p;
            }
        }
    }

    fn doc(id: &str, domain: Domain) -> Document {
        let mut d = Document::new(id, vec!["x".into()], vec![]);
        d.domain = domain;
        d
    }

    #[test]
    fn twelve_document_breakdown() {
        let docs: Vec<_> = (0..12)
            .map(|i| {
                doc(
                    &i.to_string(),
                    if i < 7 {
                        Domain::Sports
                    } else {
                        Domain::Technology
                    },
                )
            })
            .collect();
        let amb = [
            true, false, false, true, false, false, true, false, true, true, false, false,
        ];
        let mis = [
            false, true, false, true, false, false, false, true, true, false, false, true,
        ];
        let b = domain_breakdown(&docs, &amb, &mis).unwrap();
        let sports = Tally {
            accurate: 3,
            ambiguous_only: 2,
            misleading_only: 1,
            both: 1,
        };
        let finance = Tally {
            accurate: 1,
            ambiguous_only: 1,
            misleading_only: 2,
            both: 1,
        };
        assert_eq!(b.domains[&Domain::Sports], sports);
        assert_eq!(b.domains[&Domain::Technology], finance);
        assert_eq!(DomainBreakdown::from_csv(&b.to_csv()).unwrap(), b);
        assert_eq!(b.to_table().lines().count(), 3);
    }
}
