use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamConfig, AdamState};
use super::loss::{loss_and_grad, ClassWeights};
use super::matrix::Matrix;
use super::params::{init_params, MlpParams};
use crate::encode::FamilyTable;
use crate::error::{Error, Result};
use crate::eval::balanced_accuracy;
use crate::seed::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Epochs without strict improvement of the monitor before stopping.
    pub patience: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            batch_size: 2048,
            max_epochs: 5000,
            patience: 500,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        TrainConfig { seed, ..self }
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = self.learning_rate > 0.0
            && self.batch_size > 0
            && self.max_epochs > 0
            && self.patience > 0
            && self.beta1 > 0.0
            && self.beta1 < 1.0
            && self.beta2 > 0.0
            && self.beta2 < 1.0
            && self.epsilon > 0.0;
        if !positive {
            return Err(Error::InvalidArgument(format!(
                "invalid training config {self:?}"
            )));
        }
        if self.patience > self.max_epochs {
            return Err(Error::InvalidArgument("patience exceeds max epochs".into()));
        }
        Ok(())
    }
}

/// Input rows with their class indices.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub x: Matrix<f32>,
    pub targets: Vec<usize>,
}

impl LabeledMatrix {
    pub fn new(x: Matrix<f32>, targets: Vec<usize>) -> Result<Self> {
        if x.rows() != targets.len() {
            return Err(Error::Dimension {
                expected: x.rows(),
                found: targets.len(),
            });
        }
        Ok(LabeledMatrix { x, targets })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Score evaluated after every epoch; higher is better.
pub trait Monitor {
    fn score(&mut self, epoch: usize, params: &MlpParams<f32>) -> f64;
}

/// Balanced accuracy of argmax predictions on a held-out set.
pub struct BalancedAccuracyMonitor<'a> {
    data: &'a LabeledMatrix,
}

impl<'a> BalancedAccuracyMonitor<'a> {
    pub fn new(data: &'a LabeledMatrix) -> Self {
        BalancedAccuracyMonitor { data }
    }
}

impl Monitor for BalancedAccuracyMonitor<'_> {
    fn score(&mut self, _epoch: usize, params: &MlpParams<f32>) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let predicted = predict_classes(params, &self.data.x).expect("monitor width checked");
        balanced_accuracy(&predicted, &self.data.targets).unwrap_or(0.0)
    }
}

/// Best checkpoint of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub params: MlpParams<f32>,
    pub families: FamilyTable,
    pub best_score: f64,
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub config: TrainConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub family: String,
    pub class: usize,
    pub distribution: Vec<f64>,
}

/// Trains with balanced accuracy on `monitor_set` as the early-stopping score.
pub fn train(
    train_set: &LabeledMatrix,
    monitor_set: &LabeledMatrix,
    families: &FamilyTable,
    config: &TrainConfig,
) -> Result<TrainedModel> {
    if monitor_set.x.cols() != train_set.x.cols() {
        return Err(Error::Dimension {
            expected: train_set.x.cols(),
            found: monitor_set.x.cols(),
        });
    }
    if monitor_set.targets.iter().any(|&t| t >= families.len()) {
        return Err(Error::InvalidArgument(
            "monitor target outside family table".into(),
        ));
    }
    train_with_monitor(
        train_set,
        families,
        config,
        &mut BalancedAccuracyMonitor::new(monitor_set),
    )
}

/// Mini-batch Adam on the class-weighted loss. Each epoch visits the rows in
/// a fresh order drawn from the shuffle stream of `(seed, epoch)`; the final
/// partial batch is kept. Returns the parameters of the first epoch with the
/// highest monitor score and stops once `patience` epochs pass without a
/// strict improvement, or after `max_epochs`.
pub fn train_with_monitor<M: Monitor>(
    train_set: &LabeledMatrix,
    families: &FamilyTable,
    config: &TrainConfig,
    monitor: &mut M,
) -> Result<TrainedModel> {
    config.validate()?;
    let classes = families.len();
    if train_set.is_empty() {
        return Err(Error::InvalidArgument("empty training set".into()));
    }
    if train_set.targets.iter().any(|&t| t >= classes) {
        return Err(Error::InvalidArgument(
            "training target outside family table".into(),
        ));
    }
    let first = train_set.targets[0];
    if classes < 2 || train_set.targets.iter().all(|&t| t == first) {
        return Err(Error::SingleClass);
    }

    let weights = ClassWeights::<f32>::balanced(&train_set.targets, classes);
    let adam = config.adam();
    let mut params = init_params::<f32>(config.seed, train_set.x.cols(), classes)?;
    let mut state = AdamState::new(&params);

    let mut best = (f64::NEG_INFINITY, 0usize, params.clone());
    let mut epochs_run = 0;
    let mut order: Vec<usize> = Vec::with_capacity(train_set.len());
    for epoch in 1..=config.max_epochs {
        order.clear();
        order.extend(0..train_set.len());
        order.shuffle(&mut seed::rng(config.seed, Stream::Shuffle, epoch as u64));
        for batch in order.chunks(config.batch_size) {
            let x = train_set.x.gather(batch);
            let targets: Vec<usize> = batch.iter().map(|&i| train_set.targets[i]).collect();
            let (_, grads) = loss_and_grad(&params, &x, &targets, &weights)?;
            adam_step(&mut params, &grads, &mut state, &adam);
        }
        epochs_run = epoch;

        let score = monitor.score(epoch, &params);
        if score > best.0 {
            best = (score, epoch, params.clone());
        }
        if epoch - best.1 >= config.patience {
            break;
        }
    }

    let (best_score, best_epoch, params) = best;
    Ok(TrainedModel {
        params,
        families: families.clone(),
        best_score,
        best_epoch,
        epochs_run,
        config: *config,
    })
}

/// Argmax class per row, ties to the smallest index.
pub fn predict_classes(params: &MlpParams<f32>, x: &Matrix<f32>) -> Result<Vec<usize>> {
    let logits = params.forward(x)?;
    Ok((0..logits.rows()).map(|i| argmax(logits.row(i))).collect())
}

fn argmax(row: &[f32]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = i;
        }
    }
    best
}

/// Softmax in double precision.
pub fn softmax(logits: &[f32]) -> Vec<f64> {
    let max = logits
        .iter()
        .map(|&z| z as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z as f64 - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

impl TrainedModel {
    pub fn predict(&self, x: &[f32]) -> Result<Prediction> {
        if x.len() != self.params.input_width() {
            return Err(Error::Dimension {
                expected: self.params.input_width(),
                found: x.len(),
            });
        }
        let logits = self
            .params
            .forward(&Matrix::from_vec(1, x.len(), x.to_vec()))?;
        let class = argmax(logits.row(0));
        Ok(Prediction {
            family: self.families.name(class).to_string(),
            class,
            distribution: softmax(logits.row(0)),
        })
    }

    pub fn predict_binary(&self, x: &[u8]) -> Result<Prediction> {
        let v: Vec<f32> = x.iter().map(|&b| if b == 0 { 0.0 } else { 1.0 }).collect();
        self.predict(&v)
    }
}
