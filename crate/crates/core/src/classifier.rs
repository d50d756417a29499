//! Regularized logistic regression over standardized features.
//!
//! Scores are the logistic of the linear response, so they already lie in
//! `[0, 1]` and can be averaged across views during co-training. Training is
//! full-batch gradient descent with a backtracking step, deterministic for a
//! given seed.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ClassWeighting {
    None,
    /// Each class contributes half of the total loss weight.
    #[default]
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub regularization_strength: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    pub class_weighting: ClassWeighting,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            regularization_strength: 1e-3,
            learning_rate: 1.0,
            epochs: 300,
            seed: 0,
            class_weighting: ClassWeighting::Balanced,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.regularization_strength > 0.0 && self.regularization_strength.is_finite()) {
            return Err(Error::InvalidConfig(
                "regularization_strength must be positive".into(),
            ));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(
                "learning_rate must be positive".into(),
            ));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be positive".into()));
        }
        Ok(())
    }
}

/// A trained binary classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub schema_id: String,
    pub feature_names: Vec<String>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub means: Vec<f64>,
    /// Standard deviations; constant features get 1.
    pub spreads: Vec<f64>,
    pub threshold: f64,
}

pub const DEFAULT_THRESHOLD: f64 = 0.5;

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Weighted mean log loss plus `lambda / 2 * |w|^2`, and its gradient.
///
/// `params` holds the weights followed by the bias; rows of `z` are already
/// standardized. The bias is not regularized.
pub fn loss_and_gradient(
    params: &[f64],
    z: &[Vec<f64>],
    y: &[bool],
    sample_weights: &[f64],
    lambda: f64,
) -> (f64, Vec<f64>) {
    let d = params.len() - 1;
    let (w, b) = (&params[..d], params[d]);
    let total: f64 = sample_weights.iter().sum();
    let mut loss = 0.0;
    let mut grad = vec![0.0; d + 1];
    for ((row, &label), &s) in z.iter().zip(y).zip(sample_weights) {
        let m = b + row.iter().zip(w).map(|(x, w)| x * w).sum::<f64>();
        let t = if label { 1.0 } else { 0.0 };
        loss += s * (softplus(m) - t * m);
        let r = s * (sigmoid(m) - t);
        for (g, x) in grad.iter_mut().zip(row) {
            *g += r * x;
        }
        grad[d] += r;
    }
    loss /= total;
    for g in &mut grad {
        *g /= total;
    }
    loss += 0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>();
    for (g, wi) in grad.iter_mut().zip(w) {
        *g += lambda * wi;
    }
    (loss, grad)
}

fn check_schema(reference: &FeatureVector, other: &FeatureVector) -> Result<()> {
    if other.schema_id != reference.schema_id || other.names() != reference.names() {
        return Err(Error::SchemaMismatch {
            expected: reference.schema_id.clone(),
            found: other.schema_id.clone(),
        });
    }
    Ok(())
}

/// Trains on `(features, label)` pairs. All vectors must share one schema
/// and both classes must be present.
pub fn train(examples: &[(FeatureVector, bool)], cfg: &TrainConfig) -> Result<Model> {
    fit(examples.iter().map(|(x, y)| (x, *y)), cfg)
}

/// [`train`] over borrowed vectors.
pub fn fit<'a>(
    examples: impl IntoIterator<Item = (&'a FeatureVector, bool)>,
    cfg: &TrainConfig,
) -> Result<Model> {
    cfg.validate()?;
    let examples: Vec<(&FeatureVector, bool)> = examples.into_iter().collect();
    let Some(&(first, _)) = examples.first() else {
        return Err(Error::EmptyInput("no training examples".into()));
    };
    for (x, _) in &examples {
        check_schema(first, x)?;
    }
    let n_pos = examples.iter().filter(|(_, y)| *y).count();
    let n = examples.len();
    if n_pos == 0 || n_pos == n {
        return Err(Error::SingleClass);
    }
    let d = first.len();

    let mut means = vec![0.0; d];
    for (x, _) in &examples {
        for (m, v) in means.iter_mut().zip(x.values()) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);
    let mut spreads = vec![0.0; d];
    for (x, _) in &examples {
        for ((s, v), m) in spreads.iter_mut().zip(x.values()).zip(&means) {
            *s += (v - m).powi(2);
        }
    }
    for s in &mut spreads {
        *s = (*s / n as f64).sqrt();
        if *s < 1e-12 {
            *s = 1.0;
        }
    }

    let z: Vec<Vec<f64>> = examples
        .iter()
        .map(|(x, _)| standardize(x.values(), &means, &spreads))
        .collect();
    let y: Vec<bool> = examples.iter().map(|(_, y)| *y).collect();
    let sample_weights: Vec<f64> = match cfg.class_weighting {
        ClassWeighting::None => vec![1.0; n],
        ClassWeighting::Balanced => {
            let (wp, wn) = (
                n as f64 / (2.0 * n_pos as f64),
                n as f64 / (2.0 * (n - n_pos) as f64),
            );
            y.iter().map(|&l| if l { wp } else { wn }).collect()
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut params: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.01..0.01)).collect();
    params.push(0.0);
    let lambda = cfg.regularization_strength;
    let (mut loss, mut grad) = loss_and_gradient(&params, &z, &y, &sample_weights, lambda);
    let mut step = cfg.learning_rate;
    for _ in 0..cfg.epochs {
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if gnorm2 < 1e-20 {
            break;
        }
        // Armijo backtracking from the last accepted step.
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = params
                .iter()
                .zip(&grad)
                .map(|(p, g)| p - step * g)
                .collect();
            let (trial_loss, trial_grad) =
                loss_and_gradient(&trial, &z, &y, &sample_weights, lambda);
            if trial_loss <= loss - 0.5 * step * gnorm2 {
                params = trial;
                loss = trial_loss;
                grad = trial_grad;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        step = (step * 1.25).min(cfg.learning_rate * 16.0);
    }

    let bias = params.pop().expect("bias present");
    Ok(Model {
        schema_id: first.schema_id.clone(),
        feature_names: first.names().to_vec(),
        weights: params,
        bias,
        means,
        spreads,
        threshold: DEFAULT_THRESHOLD,
    })
}

fn standardize(values: &[f64], means: &[f64], spreads: &[f64]) -> Vec<f64> {
    values
        .iter()
        .zip(means)
        .zip(spreads)
        .map(|((v, m), s)| (v - m) / s)
        .collect()
}

impl Model {
    fn check(&self, x: &FeatureVector) -> Result<()> {
        if x.schema_id != self.schema_id || x.len() != self.weights.len() {
            return Err(Error::SchemaMismatch {
                expected: self.schema_id.clone(),
                found: x.schema_id.clone(),
            });
        }
        Ok(())
    }

    /// Linear response on the standardized input.
    pub fn response(&self, x: &FeatureVector) -> Result<f64> {
        self.check(x)?;
        Ok(self.bias
            + x.values()
                .iter()
                .zip(&self.means)
                .zip(&self.spreads)
                .zip(&self.weights)
                .map(|(((v, m), s), w)| w * (v - m) / s)
                .sum::<f64>())
    }

    pub fn save<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(|e| Error::json("writing model", e))
    }

    pub fn load<R: Read>(r: R) -> Result<Model> {
        let model: Model =
            serde_json::from_reader(r).map_err(|e| Error::json("reading model", e))?;
        let d = model.weights.len();
        if model.means.len() != d || model.spreads.len() != d || model.feature_names.len() != d {
            return Err(Error::InvalidConfig("model arrays differ in length".into()));
        }
        if model.spreads.iter().any(|s| *s <= 0.0) {
            return Err(Error::InvalidConfig(
                "model spreads must be positive".into(),
            ));
        }
        Ok(model)
    }
}

/// Probability-like score in `[0, 1]`.
pub fn predict_score(model: &Model, x: &FeatureVector) -> Result<f64> {
    model.response(x).map(sigmoid)
}

pub fn predict(model: &Model, x: &FeatureVector) -> Result<bool> {
    Ok(predict_score(model, x)? >= model.threshold)
}
