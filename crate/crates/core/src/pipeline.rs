//! Trained end-to-end detectors: feature configuration plus model, saved as
//! one JSON artifact so a document can be scored without the training data.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classifier::{fit, predict_score, Model, TrainConfig};
use crate::corpus::{Document, EmbeddingTable, LexiconSet, Task};
use crate::cotrain::ViewPair;
use crate::csr::{mine, ClassSequentialRule, MiningConfig};
use crate::encoder::{ItemInventory, SequenceDatabase};
use crate::error::{Error, Result};
use crate::features::{
    ambiguous_vector, misleading_all_vector, misleading_body_vector, misleading_head_vector,
    BodyContext, Degraded, FeatureVector, IdfTable, RteWeights, SUMMARY_SENTENCES,
};

/// Gold labels for `task`, failing on the first unlabeled document.
pub fn labels(docs: &[Document], task: Task) -> Result<Vec<bool>> {
    docs.iter()
        .map(|d| {
            d.label(task).ok_or_else(|| Error::MissingLabel {
                id: d.id.clone(),
                label: task.label_name(),
            })
        })
        .collect()
}

pub fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let file =
        File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Error::json(format!("writing {}", path.display()), e))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    if !path.exists() {
        return Err(Error::MissingArtifact(path.to_path_buf()));
    }
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    serde_json::from_reader(BufReader::new(file))
        .map_err(|e| Error::json(format!("reading {}", path.display()), e))
}

/// Headline ambiguity detector: item inventory, mined rules, classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityPipeline {
    pub inventory: IndexMap<String, String>,
    pub rules: Vec<ClassSequentialRule>,
    pub model: Model,
}

impl AmbiguityPipeline {
    /// Mines rules from the training headlines, then trains on them.
    pub fn fit(
        train: &[Document],
        lex: &LexiconSet,
        inventory: &ItemInventory,
        mining: &MiningConfig,
        tcfg: &TrainConfig,
    ) -> Result<Self> {
        let db = SequenceDatabase::from_documents(train, inventory, Task::Ambiguous)?;
        let rules = mine(&db, mining)?;
        Self::fit_with_rules(train, lex, inventory, rules, tcfg)
    }

    pub fn fit_with_rules(
        train: &[Document],
        lex: &LexiconSet,
        inventory: &ItemInventory,
        rules: Vec<ClassSequentialRule>,
        tcfg: &TrainConfig,
    ) -> Result<Self> {
        let y = labels(train, Task::Ambiguous)?;
        let x: Vec<FeatureVector> = train
            .iter()
            .map(|d| ambiguous_vector(d, lex, inventory, &rules))
            .collect();
        let model = fit(x.iter().zip(y), tcfg)?;
        Ok(AmbiguityPipeline {
            inventory: inventory.config(),
            rules,
            model,
        })
    }

    pub fn features(&self, docs: &[Document], lex: &LexiconSet) -> Result<Vec<FeatureVector>> {
        let inventory = ItemInventory::new(self.inventory.clone(), lex)?;
        Ok(docs
            .iter()
            .map(|d| ambiguous_vector(d, lex, &inventory, &self.rules))
            .collect())
    }

    pub fn scores(&self, docs: &[Document], lex: &LexiconSet) -> Result<Vec<f64>> {
        self.features(docs, lex)?
            .iter()
            .map(|x| predict_score(&self.model, x))
            .collect()
    }

    pub fn predict(&self, docs: &[Document], lex: &LexiconSet) -> Result<Vec<bool>> {
        let t = self.model.threshold;
        Ok(self
            .scores(docs, lex)?
            .into_iter()
            .map(|s| s >= t)
            .collect())
    }
}

/// Classifier(s) behind the misleading detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MisleadingModel {
    /// One model over both views concatenated.
    Joint { model: Model },
    /// One model per view; the score is their mean.
    CoTrained { head: Model, body: Model },
}

/// Headline/body consistency detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisleadingPipeline {
    #[serde(flatten)]
    pub featurizer: MisleadingFeaturizer,
    pub model: MisleadingModel,
}

/// Frozen resources for misleading-task feature extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisleadingFeaturizer {
    pub idf: IdfTable,
    pub rte_weights: RteWeights,
    pub summary_sentences: usize,
}

impl MisleadingFeaturizer {
    /// Document frequencies from `docs` and default weights.
    pub fn fit(docs: &[Document]) -> Self {
        MisleadingFeaturizer {
            idf: IdfTable::from_documents(docs),
            rte_weights: RteWeights::default(),
            summary_sentences: SUMMARY_SENTENCES,
        }
    }

    fn context<'a>(&'a self, lex: &'a LexiconSet, emb: &'a EmbeddingTable) -> BodyContext<'a> {
        BodyContext {
            lex,
            embeddings: emb,
            idf: &self.idf,
            weights: self.rte_weights,
            summary_sentences: self.summary_sentences,
        }
    }

    pub fn views(
        &self,
        doc: &Document,
        lex: &LexiconSet,
        emb: &EmbeddingTable,
    ) -> (ViewPair, Degraded) {
        let (body, degraded) = misleading_body_vector(doc, &self.context(lex, emb));
        let pair = ViewPair {
            id: doc.id.clone(),
            head: misleading_head_vector(doc, lex),
            body,
        };
        (pair, degraded)
    }

    pub fn joint(
        &self,
        doc: &Document,
        lex: &LexiconSet,
        emb: &EmbeddingTable,
    ) -> (FeatureVector, Degraded) {
        misleading_all_vector(doc, &self.context(lex, emb))
    }

    pub fn with_model(self, model: MisleadingModel) -> MisleadingPipeline {
        MisleadingPipeline {
            featurizer: self,
            model,
        }
    }
}

impl MisleadingPipeline {
    /// Fits the idf table and a joint model on labeled training documents.
    pub fn fit_joint(
        train: &[Document],
        lex: &LexiconSet,
        emb: &EmbeddingTable,
        tcfg: &TrainConfig,
    ) -> Result<Self> {
        let featurizer = MisleadingFeaturizer::fit(train);
        let y = labels(train, Task::Misleading)?;
        let x: Vec<FeatureVector> = train
            .iter()
            .map(|d| featurizer.joint(d, lex, emb).0)
            .collect();
        let model = fit(x.iter().zip(y), tcfg)?;
        Ok(featurizer.with_model(MisleadingModel::Joint { model }))
    }

    pub fn threshold(&self) -> f64 {
        match &self.model {
            MisleadingModel::Joint { model } => model.threshold,
            MisleadingModel::CoTrained { head, .. } => head.threshold,
        }
    }

    pub fn scores(
        &self,
        docs: &[Document],
        lex: &LexiconSet,
        emb: &EmbeddingTable,
    ) -> Result<Vec<f64>> {
        let f = &self.featurizer;
        docs.iter()
            .map(|d| match &self.model {
                MisleadingModel::Joint { model } => predict_score(model, &f.joint(d, lex, emb).0),
                MisleadingModel::CoTrained { head, body } => {
                    crate::cotrain::combined_score(head, body, &f.views(d, lex, emb).0)
                }
            })
            .collect()
    }

    pub fn predict(
        &self,
        docs: &[Document],
        lex: &LexiconSet,
        emb: &EmbeddingTable,
    ) -> Result<Vec<bool>> {
        let t = self.threshold();
        Ok(self
            .scores(docs, lex, emb)?
            .into_iter()
            .map(|s| s >= t)
            .collect())
    }
}
