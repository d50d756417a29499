//! Two-view co-training.
//!
//! Each instance carries a headline-only view and a body view. Per iteration,
//! a classifier is trained on each view from the current labeled set; each
//! labels its `p` highest- and `n` lowest-scoring unlabeled instances, and the
//! union moves into the labeled set. An instance chosen by both views with
//! different labels is dropped from the pool and never labeled.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::classifier::{fit, predict_score, Model, TrainConfig};
use crate::error::{Error, Result};
use crate::eval::{precision_recall_f, EvalReport};
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoTrainConfig {
    /// Positives promoted per view per iteration.
    pub p: usize,
    /// Negatives promoted per view per iteration.
    pub n: usize,
    pub iterations: usize,
}

impl Default for CoTrainConfig {
    fn default() -> Self {
        CoTrainConfig {
            p: 10,
            n: 20,
            iterations: 50,
        }
    }
}

impl CoTrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.n == 0 || self.iterations == 0 {
            return Err(Error::InvalidConfig(
                "p, n and iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Negatives per iteration that keep the gold class ratio for a given `p`.
pub fn negatives_for(p: usize, gold: &[bool]) -> usize {
    let pos = gold.iter().filter(|&&g| g).count();
    let neg = gold.len() - pos;
    if pos == 0 {
        return p.max(1);
    }
    ((p as f64 * neg as f64 / pos as f64).round() as usize).max(1)
}

/// One instance's two feature views.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewPair {
    pub id: String,
    pub head: FeatureVector,
    pub body: FeatureVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Gold,
    PromotedH,
    PromotedB,
    /// Selected by both views with the same label.
    PromotedBoth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledEntry {
    pub id: String,
    pub label: bool,
    pub provenance: Provenance,
}

/// Counts for one iteration. View counts exclude conflicts; an instance both
/// views agreed on counts for each view and once in `agreements`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub promoted_h_pos: usize,
    pub promoted_h_neg: usize,
    pub promoted_b_pos: usize,
    pub promoted_b_neg: usize,
    pub agreements: usize,
    pub conflicts: usize,
    pub conflict_ids: Vec<String>,
    #[serde(rename = "L_size")]
    pub l_size: usize,
    #[serde(rename = "U_size")]
    pub u_size: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoTrainState {
    pub labeled: Vec<LabeledEntry>,
    pub unlabeled: BTreeSet<String>,
    pub iteration: usize,
    pub history: Vec<IterationRecord>,
}

impl CoTrainState {
    /// One JSON object per iteration record.
    pub fn write_history<W: Write>(&self, mut w: W) -> Result<()> {
        for rec in &self.history {
            let line = serde_json::to_string(rec).map_err(|e| Error::json("writing history", e))?;
            writeln!(w, "{line}").map_err(|e| Error::io("writing history", e))?;
        }
        Ok(())
    }
}

/// Mean of the two views' scores.
pub fn combined_score(model_h: &Model, model_b: &Model, pair: &ViewPair) -> Result<f64> {
    Ok((predict_score(model_h, &pair.head)? + predict_score(model_b, &pair.body)?) / 2.0)
}

fn train_views(
    instances: &[ViewPair],
    labeled: &[(usize, bool)],
    tcfg: &TrainConfig,
) -> Result<(Model, Model)> {
    let (h, b) = std::thread::scope(|s| {
        let h = s.spawn(|| fit(labeled.iter().map(|&(i, y)| (&instances[i].head, y)), tcfg));
        let b = fit(labeled.iter().map(|&(i, y)| (&instances[i].body, y)), tcfg);
        (h.join().expect("head-view training panicked"), b)
    });
    Ok((h?, b?))
}

/// Algorithm state that can be advanced one iteration at a time.
#[derive(Debug, Clone)]
pub struct CoTrainer {
    instances: Vec<ViewPair>,
    index: HashMap<String, usize>,
    /// Training rows for the current labeled set, in labeled order.
    labeled_rows: Vec<(usize, bool)>,
    state: CoTrainState,
    cfg: CoTrainConfig,
    tcfg: TrainConfig,
    model_h: Model,
    model_b: Model,
}

impl CoTrainer {
    /// Trains the initial view classifiers on `gold`.
    pub fn new(
        gold: Vec<(ViewPair, bool)>,
        pool: Vec<ViewPair>,
        cfg: CoTrainConfig,
        tcfg: TrainConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        let mut instances = Vec::with_capacity(gold.len() + pool.len());
        let mut index = HashMap::new();
        let mut state = CoTrainState::default();
        let mut labeled_rows = Vec::with_capacity(gold.len());
        for (pair, label) in gold {
            if index.insert(pair.id.clone(), instances.len()).is_some() {
                return Err(Error::DuplicateId(pair.id));
            }
            labeled_rows.push((instances.len(), label));
            state.labeled.push(LabeledEntry {
                id: pair.id.clone(),
                label,
                provenance: Provenance::Gold,
            });
            instances.push(pair);
        }
        for pair in pool {
            if index.insert(pair.id.clone(), instances.len()).is_some() {
                return Err(Error::DuplicateId(pair.id));
            }
            state.unlabeled.insert(pair.id.clone());
            instances.push(pair);
        }
        let (model_h, model_b) = train_views(&instances, &labeled_rows, &tcfg)?;
        Ok(CoTrainer {
            instances,
            index,
            labeled_rows,
            state,
            cfg,
            tcfg,
            model_h,
            model_b,
        })
    }

    pub fn state(&self) -> &CoTrainState {
        &self.state
    }

    /// Classifiers trained on the current labeled set.
    pub fn models(&self) -> (&Model, &Model) {
        (&self.model_h, &self.model_b)
    }

    pub fn is_finished(&self) -> bool {
        self.state.iteration >= self.cfg.iterations || self.state.unlabeled.is_empty()
    }

    /// Ids the model labels positive and negative, ranked by score with ties
    /// broken by id.
    fn select(&self, model: &Model, head: bool) -> Result<BTreeMap<String, bool>> {
        let mut scored = Vec::with_capacity(self.state.unlabeled.len());
        for id in &self.state.unlabeled {
            let pair = &self.instances[self.index[id]];
            let x = if head { &pair.head } else { &pair.body };
            scored.push((predict_score(model, x)?, id));
        }
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
        let mut chosen = BTreeMap::new();
        let take_pos = self.cfg.p.min(scored.len());
        for (_, id) in &scored[..take_pos] {
            chosen.insert((*id).clone(), true);
        }
        let mut rest = scored.split_off(take_pos);
        rest.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)));
        for (_, id) in rest.iter().take(self.cfg.n) {
            chosen.insert((*id).clone(), false);
        }
        Ok(chosen)
    }

    /// Runs one iteration and retrains both views. Returns `None` once the
    /// iteration budget is spent or the pool is empty.
    pub fn step(&mut self) -> Result<Option<&IterationRecord>> {
        if self.is_finished() {
            return Ok(None);
        }
        let n_h = self.select(&self.model_h, true)?;
        let n_b = self.select(&self.model_b, false)?;

        let mut rec = IterationRecord {
            iteration: self.state.iteration + 1,
            promoted_h_pos: 0,
            promoted_h_neg: 0,
            promoted_b_pos: 0,
            promoted_b_neg: 0,
            agreements: 0,
            conflicts: 0,
            conflict_ids: Vec::new(),
            l_size: 0,
            u_size: 0,
        };
        let ids: BTreeSet<&String> = n_h.keys().chain(n_b.keys()).collect();
        for id in ids {
            let (label, provenance) = match (n_h.get(id), n_b.get(id)) {
                (Some(&h), Some(&b)) if h != b => {
                    rec.conflicts += 1;
                    rec.conflict_ids.push(id.clone());
                    self.state.unlabeled.remove(id);
                    continue;
                }
                (Some(&h), Some(_)) => {
                    rec.agreements += 1;
                    (h, Provenance::PromotedBoth)
                }
                (Some(&h), None) => (h, Provenance::PromotedH),
                (None, Some(&b)) => (b, Provenance::PromotedB),
                (None, None) => unreachable!("id drawn from one of the selections"),
            };
            if matches!(provenance, Provenance::PromotedH | Provenance::PromotedBoth) {
                *if label {
                    &mut rec.promoted_h_pos
                } else {
                    &mut rec.promoted_h_neg
                } += 1;
            }
            if matches!(provenance, Provenance::PromotedB | Provenance::PromotedBoth) {
                *if label {
                    &mut rec.promoted_b_pos
                } else {
                    &mut rec.promoted_b_neg
                } += 1;
            }
            self.state.unlabeled.remove(id);
            self.labeled_rows.push((self.index[id], label));
            self.state.labeled.push(LabeledEntry {
                id: id.clone(),
                label,
                provenance,
            });
        }
        self.state.iteration += 1;
        rec.l_size = self.state.labeled.len();
        rec.u_size = self.state.unlabeled.len();

        let (h, b) = train_views(&self.instances, &self.labeled_rows, &self.tcfg)?;
        self.model_h = h;
        self.model_b = b;
        self.state.history.push(rec);
        Ok(self.state.history.last())
    }

    pub fn into_result(self) -> CoTrainResult {
        CoTrainResult {
            model_h: self.model_h,
            model_b: self.model_b,
            state: self.state,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoTrainResult {
    pub model_h: Model,
    pub model_b: Model,
    pub state: CoTrainState,
}

/// Runs co-training to completion.
pub fn co_train(
    gold: Vec<(ViewPair, bool)>,
    pool: Vec<ViewPair>,
    cfg: CoTrainConfig,
    tcfg: TrainConfig,
) -> Result<CoTrainResult> {
    let mut trainer = CoTrainer::new(gold, pool, cfg, tcfg)?;
    while trainer.step()?.is_some() {}
    Ok(trainer.into_result())
}

/// Combined-score evaluation of a pair of view models.
pub fn evaluate_views(
    model_h: &Model,
    model_b: &Model,
    test: &[(ViewPair, bool)],
) -> Result<EvalReport> {
    let mut pred = Vec::with_capacity(test.len());
    for (pair, _) in test {
        pred.push(combined_score(model_h, model_b, pair)? >= model_h.threshold);
    }
    let gold: Vec<bool> = test.iter().map(|(_, y)| *y).collect();
    precision_recall_f(&pred, &gold)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: usize,
    pub n: usize,
    pub iteration: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

/// Co-trains once per `p` in `grid` with `n = 2p`, scoring the test set
/// after every iteration. Iteration 0 is the gold-only baseline; once the pool
/// runs dry the remaining checkpoints repeat the final scores.
pub fn sweep(
    gold: &[(ViewPair, bool)],
    pool: &[ViewPair],
    test: &[(ViewPair, bool)],
    grid: &[usize],
    iterations: usize,
    tcfg: &TrainConfig,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &p in grid {
        let cfg = CoTrainConfig {
            p,
            n: 2 * p,
            iterations,
        };
        let mut trainer = CoTrainer::new(gold.to_vec(), pool.to_vec(), cfg, *tcfg)?;
        let mut report = {
            let (h, b) = trainer.models();
            evaluate_views(h, b, test)?
        };
        for iteration in 0..=iterations {
            if iteration > 0 && trainer.step()?.is_some() {
                let (h, b) = trainer.models();
                report = evaluate_views(h, b, test)?;
            }
            rows.push(SweepRow {
                p,
                n: 2 * p,
                iteration,
                precision: report.precision,
                recall: report.recall,
                f_score: report.f_score,
            });
        }
    }
    Ok(rows)
}

/// Sweep table as aligned text.
pub fn format_sweep(rows: &[SweepRow]) -> String {
    let mut out = format!(
        "{:>4} {:>4} {:>9} {:>9} {:>9} {:>9}\n",
        "p", "n", "iteration", "precision", "recall", "f_score"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>4} {:>4} {:>9} {:>9.4} {:>9.4} {:>9.4}\n",
            r.p, r.n, r.iteration, r.precision, r.recall, r.f_score
        ));
    }
    out
}
