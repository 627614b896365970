use num_traits::{Float, FromPrimitive};
use std::fmt::Debug;

/// Scalar type of the network: `f32` for training, `f64` for gradient checks.
pub trait Real: Float + FromPrimitive + Debug + Default + Send + Sync + 'static {}

impl<T: Float + FromPrimitive + Debug + Default + Send + Sync + 'static> Real for T {}

pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("representable constant")
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    /// Stacks binary rows into a matrix of 0/1 values.
    pub fn from_binary_rows<'a, I>(rows: I, cols: usize) -> Self
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut data = Vec::new();
        let mut n = 0;
        for row in rows {
            assert_eq!(row.len(), cols, "row width");
            data.extend(
                row.iter()
                    .map(|&b| if b == 0 { T::zero() } else { T::one() }),
            );
            n += 1;
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Rows `indices` of `self`, in that order.
    pub fn gather(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }
}

/// `x · w + b`, skipping zero entries of `x` (inputs are sparse and binary).
pub(crate) fn affine<T: Real>(x: &Matrix<T>, w: &Matrix<T>, b: &[T]) -> Matrix<T> {
    debug_assert_eq!(x.cols, w.rows);
    let mut out = Matrix::zeros(x.rows, w.cols);
    for i in 0..x.rows {
        let o = out.row_mut(i);
        o.copy_from_slice(b);
        for (k, &xv) in x.row(i).iter().enumerate() {
            if xv == T::zero() {
                continue;
            }
            for (oj, &wj) in o.iter_mut().zip(w.row(k)) {
                *oj = *oj + xv * wj;
            }
        }
    }
    out
}

/// Accumulates `aᵀ · d` into `gw` and the column sums of `d` into `gb`.
pub(crate) fn accumulate_weight_grad<T: Real>(
    a: &Matrix<T>,
    d: &Matrix<T>,
    gw: &mut Matrix<T>,
    gb: &mut [T],
) {
    for i in 0..a.rows {
        let di = d.row(i);
        for (gbj, &dj) in gb.iter_mut().zip(di) {
            *gbj = *gbj + dj;
        }
        for (k, &av) in a.row(i).iter().enumerate() {
            if av == T::zero() {
                continue;
            }
            for (g, &dj) in gw.row_mut(k).iter_mut().zip(di) {
                *g = *g + av * dj;
            }
        }
    }
}

/// `d · wᵀ`.
pub(crate) fn backprop_input<T: Real>(d: &Matrix<T>, w: &Matrix<T>) -> Matrix<T> {
    let mut out = Matrix::zeros(d.rows, w.rows);
    for i in 0..d.rows {
        let di = d.row(i);
        for k in 0..w.rows {
            let mut s = T::zero();
            for (&dj, &wj) in di.iter().zip(w.row(k)) {
                s = s + dj * wj;
            }
            out.row_mut(i)[k] = s;
        }
    }
    out
}

pub(crate) fn relu_in_place<T: Real>(m: &mut Matrix<T>) {
    for v in &mut m.data {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
}
