use crate::corpus::{Document, LexiconSet, WordSet};
use crate::encoder::{is_numeral, is_punctuation};

use super::FeatureVector;

pub const BASIC_SCHEMA: &str = "basic";

pub const BASIC_NAMES: [&str; 14] = [
    "Wordcnt",
    "Number",
    "Baitword",
    "Slang",
    "Punctuation",
    "SentDegree.very",
    "SentDegree.extreme",
    "SentPolar.pos_eval",
    "SentPolar.neg_eval",
    "SentPolar.pos_emotion",
    "SentPolar.neg_emotion",
    "Distance",
    "WHword",
    "ForwardRef",
];

pub(crate) fn hits<S: AsRef<str>>(tokens: &[S], set: &WordSet) -> usize {
    tokens.iter().filter(|t| set.contains(t.as_ref())).count()
}

/// Mean `|head - dependent|` over the headline dependencies; 0 when absent.
pub fn mean_dependency_distance(doc: &Document) -> f64 {
    match doc.headline_deps.as_deref() {
        Some(deps) if !deps.is_empty() => {
            let total: usize = deps.iter().map(|&(h, d)| h.abs_diff(d)).sum();
            total as f64 / deps.len() as f64
        }
        _ => 0.0,
    }
}

/// Raw counts over the headline, in [`BASIC_NAMES`] order.
pub fn basic_features(doc: &Document, lex: &LexiconSet) -> FeatureVector {
    let h = &doc.headline;
    let count = |pred: fn(&str) -> bool| h.iter().filter(|t| pred(t)).count() as f64;
    let values = [
        h.len() as f64,
        count(is_numeral),
        hits(h, &lex.clickbait_words) as f64,
        hits(h, &lex.slang) as f64,
        count(is_punctuation),
        hits(h, &lex.degree_very) as f64,
        hits(h, &lex.degree_extreme) as f64,
        hits(h, &lex.pos_eval) as f64,
        hits(h, &lex.neg_eval) as f64,
        hits(h, &lex.pos_emotion) as f64,
        hits(h, &lex.neg_emotion) as f64,
        mean_dependency_distance(doc),
        hits(h, &lex.interrogatives) as f64,
        hits(h, &lex.forward_ref) as f64,
    ];
    FeatureVector::from_pairs(BASIC_SCHEMA, BASIC_NAMES.into_iter().zip(values))
}
