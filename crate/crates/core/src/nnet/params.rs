use rand::Rng;

use super::matrix::{affine, real, relu_in_place, Matrix, Real};
use crate::error::{Error, Result};
use crate::seed::{self, Stream};

/// Hidden layer width per output class.
pub const HIDDEN_PER_CLASS: usize = 4;

/// Weights and biases of the two-hidden-layer network
/// `input -> h -> h -> K` with `h = 4K`. Weight matrices are stored
/// `(fan_in, fan_out)` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams<T> {
    pub w1: Matrix<T>,
    pub b1: Vec<T>,
    pub w2: Matrix<T>,
    pub b2: Vec<T>,
    pub w3: Matrix<T>,
    pub b3: Vec<T>,
}

/// Intermediate values of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache<T> {
    pub z1: Matrix<T>,
    pub a1: Matrix<T>,
    pub z2: Matrix<T>,
    pub a2: Matrix<T>,
    pub logits: Matrix<T>,
}

impl<T: Real> MlpParams<T> {
    /// All-zero parameters for `input_width` inputs and `classes` outputs.
    pub fn zeros(input_width: usize, classes: usize) -> Self {
        let h = HIDDEN_PER_CLASS * classes;
        MlpParams {
            w1: Matrix::zeros(input_width, h),
            b1: vec![T::zero(); h],
            w2: Matrix::zeros(h, h),
            b2: vec![T::zero(); h],
            w3: Matrix::zeros(h, classes),
            b3: vec![T::zero(); classes],
        }
    }

    pub fn input_width(&self) -> usize {
        self.w1.rows()
    }

    pub fn hidden_width(&self) -> usize {
        self.w1.cols()
    }

    pub fn classes(&self) -> usize {
        self.w3.cols()
    }

    pub fn parameter_count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    /// Tensors in storage order: w1, b1, w2, b2, w3, b3.
    pub fn tensors(&self) -> [&[T]; 6] {
        [
            self.w1.as_slice(),
            &self.b1,
            self.w2.as_slice(),
            &self.b2,
            self.w3.as_slice(),
            &self.b3,
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut [T]; 6] {
        [
            self.w1.as_mut_slice(),
            &mut self.b1,
            self.w2.as_mut_slice(),
            &mut self.b2,
            self.w3.as_mut_slice(),
            &mut self.b3,
        ]
    }

    pub fn forward_cached(&self, x: &Matrix<T>) -> Result<ForwardCache<T>> {
        if x.cols() != self.input_width() {
            return Err(Error::Dimension {
                expected: self.input_width(),
                found: x.cols(),
            });
        }
        let z1 = affine(x, &self.w1, &self.b1);
        let mut a1 = z1.clone();
        relu_in_place(&mut a1);
        let z2 = affine(&a1, &self.w2, &self.b2);
        let mut a2 = z2.clone();
        relu_in_place(&mut a2);
        let logits = affine(&a2, &self.w3, &self.b3);
        Ok(ForwardCache {
            z1,
            a1,
            z2,
            a2,
            logits,
        })
    }

    /// `ReLU(ReLU(x·W1 + b1)·W2 + b2)·W3 + b3`, one row of logits per input row.
    pub fn forward(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        Ok(self.forward_cached(x)?.logits)
    }
}

/// He-style uniform initialization: each weight is drawn from
/// `[-sqrt(6 / fan_in), +sqrt(6 / fan_in)]`; biases are zero.
/// Weights are drawn W1, W2, W3 in row-major order from the init stream of `seed`.
pub fn init_params<T: Real>(seed: u64, input_width: usize, classes: usize) -> Result<MlpParams<T>> {
    if input_width < 1 {
        return Err(Error::InvalidArgument(
            "input width must be at least 1".into(),
        ));
    }
    if classes < 2 {
        return Err(Error::InvalidArgument(
            "at least two classes are required".into(),
        ));
    }
    let mut params = MlpParams::zeros(input_width, classes);
    let mut rng = seed::rng(seed, Stream::Init, 0);
    for w in [&mut params.w1, &mut params.w2, &mut params.w3] {
        let bound = init_bound(w.rows());
        for v in w.as_mut_slice() {
            let u: f64 = rng.random();
            *v = real((2.0 * u - 1.0) * bound);
        }
    }
    Ok(params)
}

pub fn init_bound(fan_in: usize) -> f64 {
    (6.0 / fan_in as f64).sqrt()
}
