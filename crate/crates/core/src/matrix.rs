//! Dense row-major point matrix.

use crate::error::{FisherError, Result};

/// An `N x D` dense matrix whose rows are points and columns are features.
///
/// Storage is row-major so a point is a contiguous slice, which is what the
/// pairwise kernels iterate over. Every constructor checks that there are at
/// least two points, at least one feature, and that all entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    n_points: usize,
    n_features: usize,
}

impl DataMatrix {
    pub fn new(n_points: usize, n_features: usize, values: Vec<f64>) -> Result<Self> {
        if n_points < 2 {
            return Err(FisherError::InvalidInput(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        if n_features < 1 {
            return Err(FisherError::InvalidInput("need at least 1 feature".into()));
        }
        if values.len() != n_points * n_features {
            return Err(FisherError::InvalidInput(format!(
                "buffer of length {} does not match shape {n_points}x{n_features}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(FisherError::InvalidInput(format!(
                "non-finite entry {} at row {}, column {}",
                values[pos],
                pos / n_features,
                pos % n_features
            )));
        }
        Ok(Self {
            values,
            n_points,
            n_features,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_features = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * n_features);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_features {
                return Err(FisherError::InvalidInput(format!(
                    "row {i} has {} entries, expected {n_features}",
                    r.len()
                )));
            }
            values.extend_from_slice(r);
        }
        Self::new(rows.len(), n_features, values)
    }

    /// Builds a matrix without re-validating. Callers guarantee the invariants.
    pub(crate) fn from_raw(n_points: usize, n_features: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), n_points * n_features);
        Self {
            values,
            n_points,
            n_features,
        }
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_features + j]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.n_features)
    }

    pub(crate) fn rows_mut(&mut self) -> std::slice::ChunksExactMut<'_, f64> {
        self.values.chunks_exact_mut(self.n_features)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn column_means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.n_features];
        for r in self.rows() {
            for (m, v) in means.iter_mut().zip(r) {
                *m += v;
            }
        }
        let n = self.n_points as f64;
        means.iter_mut().for_each(|m| *m /= n);
        means
    }

    pub fn transpose(&self) -> Result<Self> {
        let mut out = vec![0.0; self.values.len()];
        for (i, r) in self.rows().enumerate() {
            for (j, v) in r.iter().enumerate() {
                out[j * self.n_points + i] = *v;
            }
        }
        Self::new(self.n_features, self.n_points, out)
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(idx.len() * self.n_features);
        for &i in idx {
            values.extend_from_slice(self.row(i));
        }
        Self::new(idx.len(), self.n_features, values)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(idx.len() * self.n_points);
        for r in self.rows() {
            values.extend(idx.iter().map(|&j| r[j]));
        }
        Self::new(self.n_points, idx.len(), values)
    }

    /// Right-multiplies by a square `D x D` matrix given row-major.
    pub fn multiply_square(&self, m: &[f64]) -> Self {
        let d = self.n_features;
        assert_eq!(m.len(), d * d, "transform must be {d}x{d}");
        let mut out = vec![0.0; self.values.len()];
        for (src, dst) in self.rows().zip(out.chunks_exact_mut(d)) {
            for (a, mrow) in src.iter().zip(m.chunks_exact(d)) {
                for (o, b) in dst.iter_mut().zip(mrow) {
                    *o += a * b;
                }
            }
        }
        Self::from_raw(self.n_points, d, out)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nan_and_bad_shapes() {
        assert!(DataMatrix::new(2, 1, vec![1.0, f64::NAN]).is_err());
        assert!(DataMatrix::new(1, 2, vec![1.0, 2.0]).is_err());
        assert!(DataMatrix::new(2, 2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn transpose_and_select() {
        let m = DataMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        let t = m.transpose().unwrap();
        assert_eq!(t.n_points(), 3);
        assert_eq!(t.row(2), &[3.0, 6.0]);
        assert_eq!(t.transpose().unwrap(), m);
        let c = m.select_columns(&[2, 0]).unwrap();
        assert_eq!(c.row(1), &[6.0, 4.0]);
    }

    #[test]
    fn dot_matches_naive() {
        let a: Vec<f64> = (0..11).map(|i| i as f64 * 0.5).collect();
        let b: Vec<f64> = (0..11).map(|i| 1.0 - i as f64).collect();
        let naive: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((dot(&a, &b) - naive).abs() < 1e-12);
    }
}
