use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Relation, Relations};

/// Per-word match weights for dependency-pair entailment scoring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RteWeights {
    pub exact: f64,
    pub synonym: f64,
    pub hypernym: f64,
    pub hyponym: f64,
    pub antonym: f64,
}

impl Default for RteWeights {
    fn default() -> Self {
        RteWeights {
            exact: 1.0,
            synonym: 0.8,
            hypernym: 0.6,
            hyponym: 0.6,
            antonym: -1.0,
        }
    }
}

impl RteWeights {
    fn for_relation(&self, rel: Relation) -> f64 {
        match rel {
            Relation::Synonym => self.synonym,
            Relation::Hypernym => self.hypernym,
            Relation::Hyponym => self.hyponym,
            Relation::Antonym => self.antonym,
        }
    }

    /// Score for aligning headline word `h` with body word `b`, or `None`
    /// when they are unrelated.
    pub fn word_score(&self, h: &str, b: &str, relations: &Relations) -> Option<f64> {
        if h == b {
            return Some(self.exact);
        }
        relations.lookup(h, b).map(|r| self.for_relation(r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RteOutcome {
    pub score: f64,
    /// Set when either side lacks dependency annotations.
    pub degraded: bool,
}

/// Sum over headline dependency pairs of the best-scoring aligned body pair.
///
/// A body pair aligns with a headline pair when both the governing words and
/// the dependent words match (exactly or through a lexical relation); its
/// score is the product of the two word scores. Headline pairs with no
/// aligned body pair contribute nothing.
pub fn rte_score(doc: &Document, relations: &Relations, w: &RteWeights) -> RteOutcome {
    let (Some(head_deps), Some(body_deps)) = (&doc.headline_deps, &doc.body_deps) else {
        return RteOutcome {
            score: 0.0,
            degraded: true,
        };
    };
    let body_pairs: Vec<(&str, &str)> = body_deps
        .iter()
        .zip(&doc.body)
        .flat_map(|(deps, sent)| {
            deps.iter()
                .map(move |&(g, d)| (sent[g].as_str(), sent[d].as_str()))
        })
        .collect();
    let score = head_deps
        .iter()
        .map(|&(g, d)| (doc.headline[g].as_str(), doc.headline[d].as_str()))
        .filter_map(|(hg, hd)| {
            body_pairs
                .iter()
                .filter_map(|&(bg, bd)| {
                    Some(w.word_score(hg, bg, relations)? * w.word_score(hd, bd, relations)?)
                })
                .reduce(f64::max)
        })
        .sum();
    RteOutcome {
        score,
        degraded: head_deps.is_empty() || body_pairs.is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::LexiconSet;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    fn doc(
        head: &str,
        head_deps: Vec<(usize, usize)>,
        body: &[(&str, Vec<(usize, usize)>)],
    ) -> Document {
        let mut d = Document::new("d", toks(head), body.iter().map(|(s, _)| toks(s)).collect());
        d.headline_deps = Some(head_deps);
        d.body_deps = Some(body.iter().map(|(_, deps)| deps.clone()).collect());
        d
    }

    #[test]
    fn verbatim_pair_scores_exact_squared() {
        let d = doc(
            "鲤鱼 增长",
            vec![(1, 0)],
            &[("鲤鱼 迅速 增长", vec![(2, 0), (2, 1)])],
        );
        let out = rte_score(&d, &LexiconSet::builtin().relations, &RteWeights::default());
        assert_eq!(out.score, 1.0);
        assert!(!out.degraded);
    }

    #[test]
    fn synonym_pair_scores_product() {
        let d = doc("增长 鲤鱼", vec![(0, 1)], &[("增长 鲤", vec![(0, 1)])]);
        let out = rte_score(&d, &LexiconSet::builtin().relations, &RteWeights::default());
        assert!((out.score - 0.8).abs() < 1e-12);
    }

    #[test]
    fn best_body_pair_wins_and_antonyms_penalize() {
        let rel = &LexiconSet::builtin().relations;
        let d = doc(
            "鲤鱼 增长",
            vec![(1, 0)],
            &[("鲤鱼 减少", vec![(1, 0)]), ("鲤 扩张", vec![(1, 0)])],
        );
        // Antonym pair -1.0, synonym/synonym pair 0.64: the maximum is kept.
        assert!((rte_score(&d, rel, &RteWeights::default()).score - 0.64).abs() < 1e-12);
        let only_antonym = doc("鲤鱼 增长", vec![(1, 0)], &[("鲤鱼 减少", vec![(1, 0)])]);
        assert_eq!(
            rte_score(&only_antonym, rel, &RteWeights::default()).score,
            -1.0
        );
    }

    #[test]
    fn missing_annotations_degrade_to_zero() {
        let mut d = doc("a b", vec![(0, 1)], &[("a b", vec![])]);
        let rel = Relations::default();
        let out = rte_score(&d, &rel, &RteWeights::default());
        assert_eq!((out.score, out.degraded), (0.0, true));
        d.body_deps = None;
        assert!(rte_score(&d, &rel, &RteWeights::default()).degraded);
    }

    proptest! {
        #[test]
        fn monotone_in_nonnegative_weights(
            base in prop::array::uniform5(0.0f64..1.0),
            which in 0usize..5,
            bump in 0.0f64..1.0,
        ) {
            let rel = &LexiconSet::builtin().relations;
            let d = doc(
                "鲤鱼 增长 成功",
                vec![(1, 0), (2, 1)],
                &[("鲤 扩张 失败", vec![(1, 0), (2, 1)]), ("鱼 增长", vec![(1, 0)]), ("动物 减少", vec![(1, 0)])],
            );
            let mk = |v: [f64; 5]| RteWeights { exact: v[0], synonym: v[1], hypernym: v[2], hyponym: v[3], antonym: v[4] };
            let mut raised = base;
            raised[which] += bump;
            let lo = rte_score(&d, rel, &mk(base)).score;
            let hi = rte_score(&d, rel, &mk(raised)).score;
            prop_assert!(hi >= lo - 1e-12);
        }
    }
}
