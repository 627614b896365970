use serde::{Deserialize, Serialize};

use super::matrix::{real, Real};
use super::params::MlpParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub m: MlpParams<T>,
    pub v: MlpParams<T>,
    pub t: u64,
}

impl<T: Real> AdamState<T> {
    pub fn new(like: &MlpParams<T>) -> Self {
        let zeros = MlpParams::zeros(like.input_width(), like.classes());
        AdamState {
            m: zeros.clone(),
            v: zeros,
            t: 0,
        }
    }
}

/// Bias-corrected Adam update of one tensor at step `t` (1-based).
pub fn adam_update<T: Real>(
    theta: &mut [T],
    grad: &[T],
    m: &mut [T],
    v: &mut [T],
    t: u64,
    config: &AdamConfig,
) {
    let b1: T = real(config.beta1);
    let b2: T = real(config.beta2);
    let one = T::one();
    let lr: T = real(config.learning_rate);
    let eps: T = real(config.epsilon);
    let bc1: T = real(1.0 - config.beta1.powf(t as f64));
    let bc2: T = real(1.0 - config.beta2.powf(t as f64));
    for (((p, &g), mi), vi) in theta
        .iter_mut()
        .zip(grad)
        .zip(m.iter_mut())
        .zip(v.iter_mut())
    {
        *mi = b1 * *mi + (one - b1) * g;
        *vi = b2 * *vi + (one - b2) * g * g;
        let m_hat = *mi / bc1;
        let v_hat = *vi / bc2;
        *p = *p - lr * m_hat / (v_hat.sqrt() + eps);
    }
}

/// One Adam step over every parameter tensor.
pub fn adam_step<T: Real>(
    params: &mut MlpParams<T>,
    grads: &MlpParams<T>,
    state: &mut AdamState<T>,
    config: &AdamConfig,
) {
    state.t += 1;
    let t = state.t;
    let AdamState { m, v, .. } = state;
    for (((p, g), m), v) in params
        .tensors_mut()
        .into_iter()
        .zip(grads.tensors())
        .zip(m.tensors_mut())
        .zip(v.tensors_mut())
    {
        adam_update(p, g, m, v, t, config);
    }
}
