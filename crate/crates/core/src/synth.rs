//! Synthetic corpora and feature data with known structure.
//!
//! Documents use the built-in lexicon vocabulary so every feature family
//! fires. Ambiguous headlines open with a forward reference and a temporal
//! contrast; misleading headlines name an entity the body never mentions and
//! add sensational wording absent from the body.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::corpus::{Document, Domain, EmbeddingTable};
use crate::cotrain::ViewPair;
use crate::features::FeatureVector;

const TOPIC: [&str; 40] = [
    "市场",
    "公司",
    "球队",
    "比赛",
    "城市",
    "学校",
    "医院",
    "电影",
    "歌手",
    "科学家",
    "手机",
    "汽车",
    "银行",
    "政府",
    "农民",
    "游客",
    "工厂",
    "项目",
    "数据",
    "报告",
    "增长",
    "发布",
    "宣布",
    "获得",
    "举行",
    "完成",
    "推出",
    "调查",
    "显示",
    "提高",
    "计划",
    "研究",
    "服务",
    "价格",
    "技术",
    "活动",
    "系统",
    "市民",
    "学生",
    "企业",
];
const ENTITIES: [&str; 12] = [
    "张伟", "李娜", "王芳", "北京", "上海", "深圳", "华为", "腾讯", "刘洋", "陈静", "杭州", "成都",
];
const FORWARD: [&str; 4] = ["她", "他", "这", "那个"];
const PAST: [&str; 3] = ["曾经", "以前", "当年"];
const PRESENT: [&str; 3] = ["现在", "如今", "目前"];
const CONTRAST: [&str; 2] = ["但", "却"];
const BAIT: [&str; 4] = ["震惊", "竟然", "惊呆", "万万没想到"];
const EXTREME: [&str; 3] = ["最", "太", "超级"];
const NEGATIVE: [&str; 4] = ["糟糕", "可怕", "噩梦", "愤怒"];
const SLANG: [&str; 3] = ["坑爹", "吃瓜", "囧"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub documents: usize,
    pub ambiguous_rate: f64,
    pub misleading_rate: f64,
    /// Fraction of documents left without a misleading label.
    pub unlabeled_fraction: f64,
    /// Probability of flipping each gold label.
    pub label_noise: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            documents: 200,
            ambiguous_rate: 0.3,
            misleading_rate: 0.33,
            unlabeled_fraction: 0.0,
            label_noise: 0.0,
            seed: 7,
        }
    }
}

fn pick<'a, R: Rng>(rng: &mut R, words: &[&'a str]) -> &'a str {
    words.choose(rng).copied().expect("non-empty word list")
}

fn chain_deps(len: usize) -> Vec<(usize, usize)> {
    (1..len).map(|i| (i, i - 1)).collect()
}

fn owned(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

fn document<R: Rng>(rng: &mut R, id: String, ambiguous: bool, misleading: bool) -> Document {
    let topic: Vec<&str> = TOPIC.choose_multiple(rng, 8).copied().collect();
    let entity = pick(rng, &ENTITIES);

    let mut body = Vec::new();
    for s in 0..rng.gen_range(4..=6) {
        let mut sentence: Vec<&str> = (0..rng.gen_range(5..=8))
            .map(|_| pick(rng, &topic))
            .collect();
        if s == 0 || rng.gen_bool(0.3) {
            sentence.insert(0, entity);
        }
        body.push(sentence);
    }

    let mut headline: Vec<&str> = Vec::new();
    if ambiguous {
        headline.extend([pick(rng, &FORWARD), pick(rng, &PAST)]);
        headline.push(pick(rng, &topic));
        headline.extend([pick(rng, &CONTRAST), pick(rng, &PRESENT)]);
    } else {
        headline.push(entity);
        headline.push(["3", "10", "两", "5"][rng.gen_range(0..4)]);
    }
    let entity_pos;
    if misleading {
        let other = loop {
            let e = pick(rng, &ENTITIES);
            if e != entity {
                break e;
            }
        };
        entity_pos = headline.len();
        headline.push(other);
        headline.extend([pick(rng, &BAIT), pick(rng, &EXTREME), pick(rng, &NEGATIVE)]);
        if rng.gen_bool(0.5) {
            headline.push(pick(rng, &SLANG));
        }
        let unrelated: Vec<&str> = TOPIC
            .iter()
            .copied()
            .filter(|w| !topic.contains(w))
            .collect();
        headline.push(pick(rng, &unrelated));
        headline.push("！");
    } else {
        entity_pos = if ambiguous { headline.len() } else { 0 };
        if ambiguous {
            headline.push(entity);
        }
        headline.extend([pick(rng, &topic), pick(rng, &topic), pick(rng, &topic)]);
    }

    let body_entities: BTreeSet<&str> = body
        .iter()
        .flatten()
        .copied()
        .filter(|w| ENTITIES.contains(w))
        .collect();
    let mut doc = Document::new(
        id,
        owned(&headline),
        body.iter().map(|s| owned(s)).collect(),
    );
    doc.domain = Domain::ALL[rng.gen_range(0..Domain::ALL.len())];
    doc.source = ["portal-a", "portal-b", "portal-c"][rng.gen_range(0..3)].to_string();
    doc.headline_deps = Some(chain_deps(headline.len()));
    doc.body_deps = Some(body.iter().map(|s| chain_deps(s.len())).collect());
    doc.headline_entities = Some(vec![entity_pos]);
    doc.body_entity_strings = Some(body_entities.into_iter().map(str::to_owned).collect());
    doc
}

/// Labeled documents with ids `doc00000`, `doc00001`, ...
pub fn corpus(cfg: &SynthConfig) -> Vec<Document> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.documents)
        .map(|i| {
            let ambiguous = rng.gen_bool(cfg.ambiguous_rate);
            let misleading = rng.gen_bool(cfg.misleading_rate);
            let mut doc = document(&mut rng, format!("doc{i:05}"), ambiguous, misleading);
            let mut noisy = |y: bool| y != rng.gen_bool(cfg.label_noise);
            doc.label_ambiguous = Some(noisy(ambiguous));
            doc.label_misleading = Some(noisy(misleading));
            if rng.gen_bool(cfg.unlabeled_fraction) {
                doc.label_misleading = None;
            }
            doc
        })
        .collect()
}

/// Random unit vectors for every token in `docs`, assigned in sorted order.
pub fn embeddings(docs: &[Document], dimension: usize, seed: u64) -> EmbeddingTable {
    let vocab: BTreeSet<&str> = docs
        .iter()
        .flat_map(|d| d.headline.iter().map(String::as_str).chain(d.body_tokens()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = EmbeddingTable::new(dimension).expect("positive dimension");
    for word in vocab {
        let v: Vec<f64> = (0..dimension)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        table
            .insert(word, v.into_iter().map(|x| x / norm).collect())
            .expect("finite vector of the table dimension");
    }
    table
}

/// Shape of [`two_view`] data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoViewConfig {
    /// Informative features per view.
    pub informative: usize,
    /// Pure-noise features per view.
    pub noise: usize,
    /// Class-mean separation per informative feature, in noise units.
    pub separation: f64,
    pub positive_rate: f64,
    pub seed: u64,
}

impl Default for TwoViewConfig {
    fn default() -> Self {
        TwoViewConfig {
            informative: 4,
            noise: 8,
            separation: 0.5,
            positive_rate: 1.0 / 3.0,
            seed: 11,
        }
    }
}

/// Instances whose two views are independent given the label, each with a
/// weak Gaussian class signal. Ids are `{prefix}{i:05}`.
pub fn two_view(count: usize, prefix: &str, cfg: &TwoViewConfig) -> Vec<(ViewPair, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let width = cfg.informative + cfg.noise;
    let view = |rng: &mut ChaCha8Rng, schema: &str, y: bool| {
        let shift = if y {
            cfg.separation / 2.0
        } else {
            -cfg.separation / 2.0
        };
        let values = (0..width)
            .map(|j| {
                let z: f64 = StandardNormal.sample(rng);
                if j < cfg.informative {
                    z + shift
                } else {
                    z
                }
            })
            .collect();
        let names = (0..width).map(|i| format!("{schema}.x{i}")).collect();
        FeatureVector::new(schema, names, values)
    };
    (0..count)
        .map(|i| {
            let y = rng.gen_bool(cfg.positive_rate);
            let pair = ViewPair {
                id: format!("{prefix}{i:05}"),
                head: view(&mut rng, "synth_head", y),
                body: view(&mut rng, "synth_body", y),
            };
            (pair, y)
        })
        .collect()
}

/// Both views of a pair concatenated, for a single-model baseline.
pub fn joint(pair: &ViewPair) -> FeatureVector {
    pair.head.concat(&pair.body, "synth_joint")
}
