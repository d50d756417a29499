use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{cosine, Document, EmbeddingTable};

/// Document frequencies from a training corpus, frozen for later scoring.
///
/// `weight(t) = ln((N + 1) / df(t))`, with unseen terms treated as `df = 1`
/// so their weight is `ln(N + 1)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IdfTable {
    pub n_docs: usize,
    pub df: BTreeMap<String, usize>,
}

impl IdfTable {
    /// Counts each document's headline and body tokens as one unit.
    pub fn from_documents<'a>(docs: impl IntoIterator<Item = &'a Document>) -> Self {
        let mut table = IdfTable::default();
        for doc in docs {
            table.n_docs += 1;
            let terms: HashSet<&str> = doc
                .headline
                .iter()
                .map(String::as_str)
                .chain(doc.body_tokens())
                .collect();
            for t in terms {
                *table.df.entry(t.to_owned()).or_default() += 1;
            }
        }
        table
    }

    pub fn weight(&self, term: &str) -> f64 {
        let df = self.df.get(term).copied().unwrap_or(0).max(1);
        ((self.n_docs as f64 + 1.0) / df as f64).ln()
    }
}

// Ordered so floating-point sums are reproducible across runs.
fn term_counts<'a, S: AsRef<str> + 'a>(
    tokens: impl IntoIterator<Item = &'a S>,
) -> BTreeMap<&'a str, f64> {
    let mut tf = BTreeMap::new();
    for t in tokens {
        *tf.entry(t.as_ref()).or_insert(0.0) += 1.0;
    }
    tf
}

fn weighted_cosine(
    a: &BTreeMap<&str, f64>,
    b: &BTreeMap<&str, f64>,
    idf: impl Fn(&str) -> f64,
) -> f64 {
    let norm = |m: &BTreeMap<&str, f64>| {
        m.iter()
            .map(|(t, c)| (c * idf(t)).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a
        .iter()
        .filter_map(|(t, ca)| b.get(t).map(|cb| ca * cb * idf(t).powi(2)))
        .sum();
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// tf-idf cosine between two token multisets.
pub fn tfidf_cosine<S: AsRef<str>>(a: &[S], b: &[S], idf: &IdfTable) -> f64 {
    weighted_cosine(&term_counts(a), &term_counts(b), |t| idf.weight(t))
}

/// Extractive summary: the `k` sentences closest (tf-idf cosine) to the
/// whole body, returned in body order. Term weights come from the body's own
/// sentences, smoothed as `ln((1 + S) / (1 + df)) + 1`.
pub fn summarize(body: &[Vec<String>], k: usize) -> Vec<Vec<String>> {
    if body.len() <= k {
        return body.to_vec();
    }
    let s = body.len() as f64;
    let mut df: HashMap<&str, f64> = HashMap::new();
    for sentence in body {
        let distinct: HashSet<&str> = sentence.iter().map(String::as_str).collect();
        for t in distinct {
            *df.entry(t).or_default() += 1.0;
        }
    }
    let idf = |t: &str| ((1.0 + s) / (1.0 + df.get(t).copied().unwrap_or(0.0))).ln() + 1.0;
    let whole = term_counts(body.iter().flatten());
    let mut scored: Vec<(usize, f64)> = body
        .iter()
        .enumerate()
        .map(|(i, sentence)| (i, weighted_cosine(&term_counts(sentence), &whole, idf)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut keep: Vec<usize> = scored[..k].iter().map(|&(i, _)| i).collect();
    keep.sort_unstable();
    keep.into_iter().map(|i| body[i].clone()).collect()
}

/// Headline/body lexical agreement measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityStats {
    /// Headline entity tokens absent from the body's entities.
    pub entity_misses: usize,
    pub min_sim: f64,
    pub avg_sim: f64,
    pub summary_sim: f64,
    /// Number of headline tokens that received a best-match score.
    pub scored_tokens: usize,
    /// Set when the document carries no entity annotation.
    pub no_entities: bool,
}

impl SimilarityStats {
    /// True when no headline token could be scored against the body.
    pub fn degraded(&self) -> bool {
        self.scored_tokens == 0
    }
}

/// Entity misses, embedding best-match statistics, and headline/summary
/// tf-idf similarity.
///
/// Each non-entity headline token with an embedding is scored by its
/// highest cosine against any body token with an embedding; out-of-vocabulary
/// tokens are left out of the statistics. When no entity strings are given
/// for the body, its tokens stand in for them.
pub fn similarity_stats(
    doc: &Document,
    emb: &EmbeddingTable,
    summary: &[Vec<String>],
    idf: &IdfTable,
) -> SimilarityStats {
    let entity_idx: HashSet<usize> = doc.headline_entities.iter().flatten().copied().collect();
    let body_entities: HashSet<&str> = match &doc.body_entity_strings {
        Some(list) => list.iter().map(String::as_str).collect(),
        None => doc.body_tokens().collect(),
    };
    let entity_misses = entity_idx
        .iter()
        .filter(|&&i| !body_entities.contains(doc.headline[i].as_str()))
        .count();

    let mut seen = HashSet::new();
    let body_vecs: Vec<&[f64]> = doc
        .body_tokens()
        .filter(|t| seen.insert(*t))
        .filter_map(|t| emb.get(t))
        .collect();
    let scores: Vec<f64> = if body_vecs.is_empty() {
        Vec::new()
    } else {
        doc.headline
            .iter()
            .enumerate()
            .filter(|(i, _)| !entity_idx.contains(i))
            .filter_map(|(_, t)| emb.get(t))
            .map(|h| {
                body_vecs
                    .iter()
                    .map(|b| cosine(h, b))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    };
    let (min_sim, avg_sim) = if scores.is_empty() {
        (0.0, 0.0)
    } else {
        let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
        let avg = scores.iter().sum::<f64>() / scores.len() as f64;
        // Rounding in the mean can dip below the minimum by an ulp.
        (min, avg.max(min))
    };

    let summary_tokens: Vec<&str> = summary.iter().flatten().map(String::as_str).collect();
    let headline: Vec<&str> = doc.headline.iter().map(String::as_str).collect();
    SimilarityStats {
        entity_misses,
        min_sim,
        avg_sim,
        summary_sim: tfidf_cosine(&headline, &summary_tokens, idf),
        scored_tokens: scores.len(),
        no_entities: doc.headline_entities.is_none(),
    }
}
