use crate::corpus::{Document, LexiconSet};

use super::basic::hits;

/// Slang frequency, bait-word frequency, and token count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Informality {
    pub slang: f64,
    pub baitword: f64,
    pub length: usize,
}

pub fn informality<S: AsRef<str>>(tokens: &[S], lex: &LexiconSet) -> Informality {
    let n = tokens.len();
    if n == 0 {
        return Informality {
            slang: 0.0,
            baitword: 0.0,
            length: 0,
        };
    }
    Informality {
        slang: hits(tokens, &lex.slang) as f64 / n as f64,
        baitword: hits(tokens, &lex.clickbait_words) as f64 / n as f64,
        length: n,
    }
}

pub const SENTIMENT_CLASSES: [&str; 5] = [
    "pos_eval",
    "neg_eval",
    "pos_emotion",
    "neg_emotion",
    "subjective",
];

/// Frequencies of the five sentiment classes, each counted independently.
pub fn sentiment<S: AsRef<str>>(tokens: &[S], lex: &LexiconSet) -> [f64; 5] {
    let n = tokens.len();
    if n == 0 {
        return [0.0; 5];
    }
    let sets = [
        &lex.pos_eval,
        &lex.neg_eval,
        &lex.pos_emotion,
        &lex.neg_emotion,
        &lex.subjective,
    ];
    sets.map(|s| hits(tokens, s) as f64 / n as f64)
}

fn body_tokens(doc: &Document) -> Vec<&str> {
    doc.body_tokens().collect()
}

/// Mean of the absolute slang and bait-word frequency differences between
/// headline and body.
pub fn informal_gap(doc: &Document, lex: &LexiconSet) -> f64 {
    let h = informality(&doc.headline, lex);
    let b = informality(&body_tokens(doc), lex);
    ((h.slang - b.slang).abs() + (h.baitword - b.baitword).abs()) / 2.0
}

/// Absolute headline/body difference of each sentiment frequency.
pub fn senti_gap(doc: &Document, lex: &LexiconSet) -> [f64; 5] {
    let h = sentiment(&doc.headline, lex);
    let b = sentiment(&body_tokens(doc), lex);
    std::array::from_fn(|i| (h[i] - b[i]).abs())
}
