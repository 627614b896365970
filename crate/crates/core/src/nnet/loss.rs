use super::matrix::{accumulate_weight_grad, backprop_input, real, Matrix, Real};
use super::params::MlpParams;
use crate::error::{Error, Result};

/// Per-class loss weights `w_c = N / (K * n_c)`, so every class carries the
/// same total weight over the training set. Classes absent from the
/// training targets are weighted as if they had one member.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassWeights<T>(Vec<T>);

impl<T: Real> ClassWeights<T> {
    pub fn balanced(targets: &[usize], classes: usize) -> Self {
        let mut counts = vec![0usize; classes];
        for &t in targets {
            counts[t] += 1;
        }
        let n = targets.len() as f64;
        let k = classes as f64;
        ClassWeights(
            counts
                .into_iter()
                .map(|c| real(n / (k * c.max(1) as f64)))
                .collect(),
        )
    }

    pub fn uniform(classes: usize) -> Self {
        ClassWeights(vec![T::one(); classes])
    }

    pub fn from_vec(weights: Vec<T>) -> Self {
        ClassWeights(weights)
    }

    pub fn get(&self, class: usize) -> T {
        self.0[class]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }
}

/// `log softmax(row)[target]`, shifted by the row maximum.
fn log_prob<T: Real>(row: &[T], target: usize) -> (T, T) {
    let max = row.iter().copied().fold(T::neg_infinity(), T::max);
    let sum = row.iter().fold(T::zero(), |s, &z| s + (z - max).exp());
    let lse = max + sum.ln();
    (row[target] - lse, lse)
}

/// Weighted mean cross-entropy
/// `sum_i w[y_i] * -log softmax(z_i)[y_i] / sum_i w[y_i]`
/// and its gradient with respect to the logits.
pub fn weighted_cross_entropy<T: Real>(
    logits: &Matrix<T>,
    targets: &[usize],
    weights: &ClassWeights<T>,
) -> Result<(T, Matrix<T>)> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    if targets.len() != logits.rows() {
        return Err(Error::Dimension {
            expected: logits.rows(),
            found: targets.len(),
        });
    }
    let total: T = targets.iter().fold(T::zero(), |s, &y| s + weights.get(y));
    let mut loss = T::zero();
    let mut grad = Matrix::zeros(logits.rows(), logits.cols());
    for (i, &y) in targets.iter().enumerate() {
        let row = logits.row(i);
        let (lp, lse) = log_prob(row, y);
        let w = weights.get(y);
        loss = loss - w * lp;
        let scale = w / total;
        for (g, &z) in grad.row_mut(i).iter_mut().zip(row) {
            *g = (z - lse).exp() * scale;
        }
        grad.row_mut(i)[y] = grad.row(i)[y] - scale;
    }
    Ok((loss / total, grad))
}

/// Loss of the network on a batch and the gradient of every parameter.
pub fn loss_and_grad<T: Real>(
    params: &MlpParams<T>,
    x: &Matrix<T>,
    targets: &[usize],
    weights: &ClassWeights<T>,
) -> Result<(T, MlpParams<T>)> {
    let cache = params.forward_cached(x)?;
    let (loss, d3) = weighted_cross_entropy(&cache.logits, targets, weights)?;
    let mut grads = MlpParams::zeros(params.input_width(), params.classes());

    accumulate_weight_grad(&cache.a2, &d3, &mut grads.w3, &mut grads.b3);
    let mut d2 = backprop_input(&d3, &params.w3);
    mask_relu(&mut d2, &cache.z2);

    accumulate_weight_grad(&cache.a1, &d2, &mut grads.w2, &mut grads.b2);
    let mut d1 = backprop_input(&d2, &params.w2);
    mask_relu(&mut d1, &cache.z1);

    accumulate_weight_grad(x, &d1, &mut grads.w1, &mut grads.b1);
    Ok((loss, grads))
}

/// Loss only; used by finite-difference checks.
pub fn loss_value<T: Real>(
    params: &MlpParams<T>,
    x: &Matrix<T>,
    targets: &[usize],
    weights: &ClassWeights<T>,
) -> Result<T> {
    let logits = params.forward(x)?;
    Ok(weighted_cross_entropy(&logits, targets, weights)?.0)
}

fn mask_relu<T: Real>(d: &mut Matrix<T>, z: &Matrix<T>) {
    for (g, &zv) in d.as_mut_slice().iter_mut().zip(z.as_slice()) {
        if zv <= T::zero() {
            *g = T::zero();
        }
    }
}
