//! Feed-forward classifier with two ReLU hidden layers of width `4K`,
//! class-weighted cross-entropy, Adam and early stopping on a monitored score.

mod adam;
pub mod checkpoint;
mod loss;
mod matrix;
mod params;
mod train;

pub use adam::{adam_step, adam_update, AdamConfig, AdamState};
pub use loss::{loss_and_grad, loss_value, weighted_cross_entropy, ClassWeights};
pub use matrix::{Matrix, Real};
pub use params::{init_bound, init_params, ForwardCache, MlpParams, HIDDEN_PER_CLASS};
pub use train::{
    predict_classes, softmax, train, train_with_monitor, BalancedAccuracyMonitor, LabeledMatrix,
    Monitor, Prediction, TrainConfig, TrainedModel,
};
