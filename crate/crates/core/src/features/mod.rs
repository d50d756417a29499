//! Feature extraction for both tasks.
//!
//! Headline features are raw counts; body features are frequencies over the
//! body's tokens. Inputs missing an annotation never fail: the affected
//! features are 0 and the document is marked in its [`Degraded`] record.

mod basic;
mod body;
mod rte;
mod similarity;
mod vector;

use serde::{Deserialize, Serialize};

pub use basic::{basic_features, mean_dependency_distance, BASIC_NAMES, BASIC_SCHEMA};
pub use body::{informal_gap, informality, senti_gap, sentiment, Informality, SENTIMENT_CLASSES};
pub use rte::{rte_score, RteOutcome, RteWeights};
pub use similarity::{similarity_stats, summarize, tfidf_cosine, IdfTable, SimilarityStats};
pub use vector::{write_matrix, FeatureVector};

use crate::corpus::{Document, EmbeddingTable, LexiconSet};
use crate::csr::{csr_features, format_pattern, ClassSequentialRule};
use crate::encoder::{encode_headline, ItemInventory};

pub const AMBIGUOUS_SCHEMA: &str = "ambiguous";
pub const MISLEADING_HEAD_SCHEMA: &str = "misleading_head";
pub const MISLEADING_BODY_SCHEMA: &str = "misleading_body";
pub const MISLEADING_ALL_SCHEMA: &str = "misleading_all";

/// Default number of sentences kept by the extractive summary.
pub const SUMMARY_SENTENCES: usize = 3;

pub const BODY_NAMES: [&str; 19] = [
    "Informality.slang",
    "Informality.baitword",
    "Informality.length",
    "Sentiment.pos_eval",
    "Sentiment.neg_eval",
    "Sentiment.pos_emotion",
    "Sentiment.neg_emotion",
    "Sentiment.subjective",
    "InformalGap",
    "SentiGap.pos_eval",
    "SentiGap.neg_eval",
    "SentiGap.pos_emotion",
    "SentiGap.neg_emotion",
    "SentiGap.subjective",
    "Similarity.entity_misses",
    "Similarity.min_sim",
    "Similarity.avg_sim",
    "Similarity.summary_sim",
    "RTEscore",
];

/// Which fallbacks a document's features needed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degraded {
    pub no_headline_deps: bool,
    pub no_body_deps: bool,
    pub no_entities: bool,
    pub no_scorable_tokens: bool,
}

impl Degraded {
    pub fn any(&self) -> bool {
        self.no_headline_deps || self.no_body_deps || self.no_entities || self.no_scorable_tokens
    }
}

/// Feature name for one rule, unique per `(pattern, class)`.
pub fn rule_feature_name(rule: &ClassSequentialRule) -> String {
    format!("CSR{}=>{}", format_pattern(&rule.pattern), rule.class)
}

/// Basic headline counts followed by one indicator per rule.
pub fn ambiguous_vector(
    doc: &Document,
    lex: &LexiconSet,
    inventory: &ItemInventory,
    rules: &[ClassSequentialRule],
) -> FeatureVector {
    let basic = basic_features(doc, lex);
    let encoded = encode_headline(&doc.headline, inventory);
    let csr = FeatureVector::new(
        "csr",
        rules.iter().map(rule_feature_name).collect(),
        csr_features(&encoded, rules),
    );
    basic.concat(&csr, AMBIGUOUS_SCHEMA)
}

/// Body-independent view: the basic headline counts without `ForwardRef`.
pub fn misleading_head_vector(doc: &Document, lex: &LexiconSet) -> FeatureVector {
    basic_features(doc, lex).without("ForwardRef", MISLEADING_HEAD_SCHEMA)
}

/// Resources shared by body-dependent extraction.
#[derive(Debug, Clone, Copy)]
pub struct BodyContext<'a> {
    pub lex: &'a LexiconSet,
    pub embeddings: &'a EmbeddingTable,
    pub idf: &'a IdfTable,
    pub weights: RteWeights,
    pub summary_sentences: usize,
}

/// Body-dependent view, in [`BODY_NAMES`] order.
pub fn misleading_body_vector(doc: &Document, ctx: &BodyContext<'_>) -> (FeatureVector, Degraded) {
    let body: Vec<&str> = doc.body_tokens().collect();
    let inf = informality(&body, ctx.lex);
    let senti = sentiment(&body, ctx.lex);
    let gap = informal_gap(doc, ctx.lex);
    let sgap = senti_gap(doc, ctx.lex);
    let summary = summarize(&doc.body, ctx.summary_sentences);
    let sim = similarity_stats(doc, ctx.embeddings, &summary, ctx.idf);
    let rte = rte_score(doc, &ctx.lex.relations, &ctx.weights);

    let mut values = Vec::with_capacity(BODY_NAMES.len());
    values.extend([inf.slang, inf.baitword, inf.length as f64]);
    values.extend(senti);
    values.push(gap);
    values.extend(sgap);
    values.extend([
        sim.entity_misses as f64,
        sim.min_sim,
        sim.avg_sim,
        sim.summary_sim,
    ]);
    values.push(rte.score);

    let degraded = Degraded {
        no_headline_deps: doc.headline_deps.as_ref().is_none_or(Vec::is_empty),
        no_body_deps: doc.body_deps.is_none(),
        no_entities: sim.no_entities,
        no_scorable_tokens: sim.degraded(),
    };
    let fv = FeatureVector::new(
        MISLEADING_BODY_SCHEMA,
        BODY_NAMES.iter().map(|s| s.to_string()).collect(),
        values,
    );
    (fv, degraded)
}

/// Both misleading views concatenated, for the single supervised model.
pub fn misleading_all_vector(doc: &Document, ctx: &BodyContext<'_>) -> (FeatureVector, Degraded) {
    let (body, degraded) = misleading_body_vector(doc, ctx);
    (
        misleading_head_vector(doc, ctx.lex).concat(&body, MISLEADING_ALL_SCHEMA),
        degraded,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::Class;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    #[test]
    fn schema_lengths() {
        let lex = LexiconSet::builtin();
        let emb = EmbeddingTable::new(2).unwrap();
        let idf = IdfTable::default();
        let ctx = BodyContext {
            lex: &lex,
            embeddings: &emb,
            idf: &idf,
            weights: RteWeights::default(),
            summary_sentences: SUMMARY_SENTENCES,
        };
        let doc = Document::new("d", toks("她 曾经 但 现在"), vec![toks("她 说 好")]);
        assert_eq!(misleading_head_vector(&doc, &lex).len(), 13);
        assert!(misleading_head_vector(&doc, &lex)
            .get("ForwardRef")
            .is_none());
        let (body, degraded) = misleading_body_vector(&doc, &ctx);
        assert_eq!(body.len(), 19);
        assert!(degraded.no_headline_deps && degraded.no_scorable_tokens && degraded.any());
        assert_eq!(misleading_all_vector(&doc, &ctx).0.len(), 32);
    }

    #[test]
    fn ambiguous_vector_appends_rule_indicators() {
        let lex = LexiconSet::builtin();
        let inv = ItemInventory::default_for(&lex);
        let rule = |p: &[&str], class| ClassSequentialRule {
            pattern: p.iter().map(|s| s.to_string()).collect(),
            class,
            support: 0.1,
            confidence: 0.9,
        };
        let rules = [
            rule(&["Ref", "But"], Class::Positive),
            rule(&["Present", "Past"], Class::Negative),
        ];
        let doc = Document::new("d", toks("她 曾经 但 现在"), vec![]);
        let fv = ambiguous_vector(&doc, &lex, &inv, &rules);
        assert_eq!(fv.len(), 16);
        assert_eq!(&fv.values()[14..], [1.0, 0.0]);
        assert_eq!(fv.names()[14], "CSR<Ref, But>=>positive");
    }
}
