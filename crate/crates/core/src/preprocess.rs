//! Standardised preprocessing before separability analysis.
//!
//! The pipeline centers the columns, runs PCA, keeps the leading components
//! whose eigenvalue is within a factor `C` of the largest, whitens them to
//! unit variance and finally projects every point onto the unit sphere.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{FisherError, Result};
use crate::matrix::DataMatrix;

/// Eigenvalues below this fraction of the largest one are clamped to zero.
pub const EIGEN_CLAMP: f64 = 1e-12;

/// Smallest row norm accepted by [`project_sphere`].
pub const MIN_ROW_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    /// Largest tolerated ratio `lambda_1 / lambda_k` (strict).
    pub condition_threshold: f64,
    pub project_to_sphere: bool,
    pub min_components: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            condition_threshold: 10.0,
            project_to_sphere: true,
            min_components: 2,
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.condition_threshold > 1.0) || !self.condition_threshold.is_finite() {
            return Err(FisherError::InvalidInput(format!(
                "condition threshold must be a finite number > 1, got {}",
                self.condition_threshold
            )));
        }
        if self.min_components == 0 {
            return Err(FisherError::InvalidInput(
                "min_components must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Principal components of a centered matrix.
///
/// With `N` points and `D` features there are `r = min(N, D)` components.
/// `components` is `D x r` stored row-major, one component per column.
/// `projections` is the centered data expressed in that basis, `N x r`.
#[derive(Debug, Clone)]
pub struct PcaResult {
    pub components: Vec<f64>,
    pub n_features: usize,
    pub eigenvalues: Vec<f64>,
    pub projections: DataMatrix,
}

impl PcaResult {
    pub fn n_components(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `c` of the component basis.
    pub fn component(&self, c: usize) -> Vec<f64> {
        let r = self.n_components();
        (0..self.n_features)
            .map(|i| self.components[i * r + c])
            .collect()
    }

    pub fn positive_count(&self) -> usize {
        self.eigenvalues.iter().take_while(|&&l| l > 0.0).count()
    }
}

/// Output of [`preprocess`].
#[derive(Debug, Clone)]
pub struct PreprocessedCloud {
    /// `N x k` normalized points.
    pub points: DataMatrix,
    pub k: usize,
    pub retained_eigenvalues: Vec<f64>,
    /// Full PCA spectrum, before selection.
    pub spectrum: Vec<f64>,
    pub on_sphere: bool,
}

impl PreprocessedCloud {
    /// Wraps points that already lie on the unit sphere, skipping PCA.
    pub fn from_unit_vectors(points: DataMatrix) -> Result<Self> {
        for (row, r) in points.rows().enumerate() {
            let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(FisherError::InvalidInput(format!(
                    "row {row} has norm {norm}, expected a unit vector"
                )));
            }
        }
        let k = points.n_features();
        Ok(Self {
            points,
            k,
            retained_eigenvalues: Vec::new(),
            spectrum: Vec::new(),
            on_sphere: true,
        })
    }
}

/// Subtracts the column means.
pub fn center(x: &DataMatrix) -> DataMatrix {
    let means = x.column_means();
    let mut out = x.clone();
    for r in out.rows_mut() {
        for (v, m) in r.iter_mut().zip(&means) {
            *v -= m;
        }
    }
    out
}

/// PCA of an already-centered matrix.
///
/// Uses a symmetric eigendecomposition of the `D x D` covariance (divisor
/// `N - 1`) when `D <= N` and of the `N x N` Gram matrix otherwise. Component
/// signs are fixed so that the largest-magnitude loading is positive, which
/// makes the result reproducible.
pub fn pca(x: &DataMatrix) -> Result<PcaResult> {
    let n = x.n_points();
    let d = x.n_features();
    if n < 2 {
        return Err(FisherError::InvalidInput("PCA needs at least 2 points".into()));
    }
    let data = DMatrix::from_row_slice(n, d, x.as_slice());
    let denom = (n - 1) as f64;

    let (mut eigenvalues, basis) = if d <= n {
        let cov = data.tr_mul(&data) / denom;
        let eig = SymmetricEigen::try_new(cov, f64::EPSILON, 10_000).ok_or_else(|| {
            FisherError::Numerical(format!(
                "symmetric eigensolver did not converge on a {d}x{d} covariance"
            ))
        })?;
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
        (vals, vecs)
    } else {
        // wide data: eigendecompose the N x N Gram matrix instead
        let gram = (&data * data.transpose()) / denom;
        let eig = SymmetricEigen::try_new(gram, f64::EPSILON, 10_000).ok_or_else(|| {
            FisherError::Numerical(format!(
                "symmetric eigensolver did not converge on a {n}x{n} Gram matrix"
            ))
        })?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let lead = vals[0].max(0.0);
        let mut vecs = DMatrix::zeros(d, n);
        for (c, &i) in order.iter().enumerate() {
            if vals[c] > EIGEN_CLAMP * lead {
                let v = data.tr_mul(&eig.eigenvectors.column(i)) / (denom * vals[c]).sqrt();
                vecs.set_column(c, &v);
            }
        }
        (vals, vecs)
    };

    let mut basis = basis;
    for mut col in basis.column_iter_mut() {
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        if pivot < 0.0 {
            col.neg_mut();
        }
    }

    let lead = eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    for l in eigenvalues.iter_mut() {
        if !(*l > EIGEN_CLAMP * lead) {
            *l = 0.0;
        }
    }

    let proj = &data * &basis;
    let r = basis.ncols();
    let mut proj_rows = Vec::with_capacity(n * r);
    for i in 0..n {
        proj_rows.extend(proj.row(i).iter());
    }
    let mut comp_rows = Vec::with_capacity(d * r);
    for i in 0..d {
        comp_rows.extend(basis.row(i).iter());
    }
    Ok(PcaResult {
        components: comp_rows,
        n_features: d,
        eigenvalues,
        projections: DataMatrix::from_raw(n, r, proj_rows),
    })
}

/// Number of leading components to keep.
///
/// Returns the largest `k` with `lambda_1 / lambda_k < c`, raised to
/// `min_components` and capped by the number of strictly positive
/// eigenvalues.
pub fn select_k(eigenvalues: &[f64], c: f64, min_components: usize) -> Result<usize> {
    let lead = eigenvalues.first().copied().unwrap_or(0.0);
    if !(lead > 0.0) {
        return Err(FisherError::Degenerate("all eigenvalues are zero".into()));
    }
    let positive = eigenvalues.iter().take_while(|&&l| l > 0.0).count();
    let k = eigenvalues
        .iter()
        .take(positive)
        .take_while(|&&l| lead / l < c)
        .count();
    let k = k.max(min_components);
    if k > positive {
        return Err(FisherError::Degenerate(format!(
            "{min_components} components requested but the data has rank {positive}"
        )));
    }
    Ok(k)
}

fn sample_std(col: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = col.clone().count() as f64;
    let mean = col.clone().sum::<f64>() / n;
    (col.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Scales the first `k` projection columns to unit sample variance.
pub fn whiten(p: &PcaResult, k: usize) -> Result<DataMatrix> {
    let proj = &p.projections;
    if k == 0 || k > proj.n_features() {
        return Err(FisherError::InvalidInput(format!(
            "cannot whiten {k} of {} components",
            proj.n_features()
        )));
    }
    let mut scale = Vec::with_capacity(k);
    for c in 0..k {
        let s = sample_std(proj.rows().map(move |r| r[c]));
        if !(s > 0.0) || !(p.eigenvalues[c] > 0.0) {
            return Err(FisherError::Degenerate(format!(
                "principal component {c} has zero variance"
            )));
        }
        scale.push(1.0 / s);
    }
    let mut out = Vec::with_capacity(proj.n_points() * k);
    for r in proj.rows() {
        out.extend(r[..k].iter().zip(&scale).map(|(v, s)| v * s));
    }
    Ok(DataMatrix::from_raw(proj.n_points(), k, out))
}

/// Rescales every row to unit Euclidean norm.
pub fn project_sphere(u: &DataMatrix) -> Result<DataMatrix> {
    let mut out = u.clone();
    for (row, r) in out.rows_mut().enumerate() {
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm >= MIN_ROW_NORM) {
            return Err(FisherError::DegeneratePoint { row, norm });
        }
        r.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(out)
}

/// Center, PCA, select `k`, whiten and (optionally) project onto the sphere.
pub fn preprocess(x: &DataMatrix, cfg: &PreprocessConfig) -> Result<PreprocessedCloud> {
    cfg.validate()?;
    let centered = center(x);
    let p = pca(&centered)?;
    let k = select_k(&p.eigenvalues, cfg.condition_threshold, cfg.min_components)?;
    let white = whiten(&p, k)?;
    let points = if cfg.project_to_sphere {
        project_sphere(&white)?
    } else {
        white
    };
    Ok(PreprocessedCloud {
        points,
        k,
        retained_eigenvalues: p.eigenvalues[..k].to_vec(),
        spectrum: p.eigenvalues,
        on_sphere: cfg.project_to_sphere,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal, Uniform};

    fn gaussian(n: usize, d: usize, seed: u64) -> DataMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..n * d).map(|_| StandardNormal.sample(&mut rng)).collect();
        DataMatrix::new(n, d, v).unwrap()
    }

    fn covariance(x: &DataMatrix) -> Vec<Vec<f64>> {
        let c = center(x);
        let d = x.n_features();
        let mut cov = vec![vec![0.0; d]; d];
        for r in c.rows() {
            for i in 0..d {
                for j in 0..d {
                    cov[i][j] += r[i] * r[j];
                }
            }
        }
        let den = (x.n_points() - 1) as f64;
        cov.iter_mut().flatten().for_each(|v| *v /= den);
        cov
    }

    #[test]
    fn center_two_points() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let c = center(&x);
        assert_eq!(c.as_slice(), &[-1.0, -1.0, 1.0, 1.0]);
        assert_eq!(center(&c), c);
    }

    #[test]
    fn center_random_columns_sum_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = Uniform::new(-5.0, 20.0).unwrap();
        let x = DataMatrix::new(50, 5, (0..250).map(|_| u.sample(&mut rng)).collect()).unwrap();
        let c = center(&x);
        for j in 0..5 {
            let s: f64 = c.column(j).iter().sum();
            assert!(s.abs() < 1e-9, "column {j} sums to {s}");
        }
    }

    #[test]
    fn pca_rank_one() {
        let x = DataMatrix::from_rows(&[[-2.0, 0.0], [-1.0, 0.0], [1.0, 0.0], [2.0, 0.0]]).unwrap();
        let p = pca(&x).unwrap();
        assert!((p.eigenvalues[0] - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(p.eigenvalues[1], 0.0);
        let c0 = p.component(0);
        assert!((c0[0].abs() - 1.0).abs() < 1e-12 && c0[1].abs() < 1e-12);
    }

    #[test]
    fn pca_isotropic_gaussian() {
        let x = center(&gaussian(10_000, 2, 11));
        let p = pca(&x).unwrap();
        for l in &p.eigenvalues {
            assert!((l - 1.0).abs() < 0.1, "eigenvalue {l}");
        }
    }

    #[test]
    fn pca_trace_orthonormality_and_reconstruction() {
        let mut x = gaussian(300, 6, 5);
        // anisotropic columns
        let scales = [5.0, 3.0, 2.0, 1.0, 0.5, 0.1];
        let mut v = x.clone().into_vec();
        for r in v.chunks_exact_mut(6) {
            for (a, s) in r.iter_mut().zip(scales) {
                *a *= s;
            }
        }
        x = center(&DataMatrix::new(300, 6, v).unwrap());
        let p = pca(&x).unwrap();
        let trace: f64 = covariance(&x).iter().enumerate().map(|(i, r)| r[i]).sum();
        let total: f64 = p.eigenvalues.iter().sum();
        assert!((trace - total).abs() / trace < 1e-8);
        assert!(p.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        for a in 0..6 {
            for b in 0..6 {
                let ip: f64 = p.component(a).iter().zip(p.component(b)).map(|(x, y)| x * y).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-10);
            }
        }
        // x = projections * components^T
        let mut err = 0.0f64;
        let mut norm = 0.0f64;
        for i in 0..300 {
            for f in 0..6 {
                let rec: f64 = (0..6).map(|c| p.projections.get(i, c) * p.components[f * 6 + c]).sum();
                err += (rec - x.get(i, f)).powi(2);
                norm += x.get(i, f).powi(2);
            }
        }
        assert!((err / norm).sqrt() < 1e-8);
    }

    #[test]
    fn pca_wide_matrix() {
        let x = center(&gaussian(8, 30, 2));
        let p = pca(&x).unwrap();
        assert_eq!(p.n_components(), 8);
        // rank N-1 after centering
        assert_eq!(p.positive_count(), 7);
        let trace: f64 = covariance(&x).iter().enumerate().map(|(i, r)| r[i]).sum();
        let total: f64 = p.eigenvalues.iter().sum();
        assert!((trace - total).abs() / trace < 1e-8);
        for a in 0..7 {
            let ip: f64 = p.component(a).iter().map(|v| v * v).sum();
            assert!((ip - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn select_k_rules() {
        assert_eq!(select_k(&[10.0, 5.0, 1.5, 0.9], 10.0, 2).unwrap(), 3);
        assert_eq!(select_k(&[1.0, 1.0, 1.0, 1.0], 10.0, 2).unwrap(), 4);
        assert!(matches!(
            select_k(&[10.0, 0.0, 0.0], 10.0, 2),
            Err(FisherError::Degenerate(_))
        ));
        assert!(matches!(
            select_k(&[0.0, 0.0], 10.0, 2),
            Err(FisherError::Degenerate(_))
        ));
        // a ratio of exactly c is excluded
        assert_eq!(select_k(&[10.0, 1.0, 1.0], 10.0, 1).unwrap(), 1);
        assert_eq!(select_k(&[10.0, 1.0, 1.0], 10.0, 2).unwrap(), 2);
    }

    #[test]
    fn select_k_monotone_in_c() {
        let spec = [9.0, 7.0, 4.0, 2.0, 1.0, 0.5, 0.25, 0.1];
        let mut last = 0;
        for i in 0..60 {
            let c = 1.01 + i as f64;
            let k = select_k(&spec, c, 1).unwrap();
            assert!(k >= last);
            last = k;
        }
    }

    #[test]
    fn whiten_scalar_column() {
        let x = DataMatrix::from_rows(&[[-2.0, 0.1], [2.0, -0.1], [-2.0, -0.1], [2.0, 0.1]]).unwrap();
        let p = pca(&x).unwrap();
        let w = whiten(&p, 1).unwrap();
        assert_eq!(w.n_features(), 1);
        let s = sample_std(w.rows().map(|r| r[0]));
        assert!((s - 1.0).abs() < 1e-12);
        // std of the first projection is 4/sqrt(3), so entries are +-sqrt(3)/2
        for r in w.rows() {
            assert!((r[0].abs() - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn whiten_gives_identity_covariance() {
        let mut v = gaussian(10_000, 3, 8).into_vec();
        for r in v.chunks_exact_mut(3) {
            r[0] = 3.0 * r[0] + r[1];
            r[2] *= 0.5;
        }
        let x = center(&DataMatrix::new(10_000, 3, v).unwrap());
        let w = whiten(&pca(&x).unwrap(), 3).unwrap();
        let cov = covariance(&w);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((cov[i][j] - e).abs() < 1e-6, "cov[{i}][{j}] = {}", cov[i][j]);
            }
        }
    }

    #[test]
    fn project_sphere_rows() {
        let u = DataMatrix::from_rows(&[[3.0, 4.0], [0.6, 0.8]]).unwrap();
        let s = project_sphere(&u).unwrap();
        assert!((s.get(0, 0) - 0.6).abs() < 1e-15 && (s.get(0, 1) - 0.8).abs() < 1e-15);
        assert!((s.get(1, 0) - 0.6).abs() < 1e-15 && (s.get(1, 1) - 0.8).abs() < 1e-15);

        let z = DataMatrix::from_rows(&[[1.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(
            project_sphere(&z),
            Err(FisherError::DegeneratePoint { row: 1, .. })
        ));

        let g = project_sphere(&gaussian(200, 7, 1)).unwrap();
        for r in g.rows() {
            let n: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn preprocess_rank_two_in_r10() {
        let base = gaussian(400, 2, 4);
        let mut v = Vec::with_capacity(4000);
        for r in base.rows() {
            for j in 0..10 {
                v.push(r[0] * (j as f64 + 1.0) - r[1] * (j as f64).cos());
            }
        }
        let x = DataMatrix::new(400, 10, v).unwrap();
        let c = preprocess(&x, &PreprocessConfig::default()).unwrap();
        assert_eq!(c.k, 2);
        assert!(c.on_sphere);
    }

    #[test]
    fn preprocess_keeps_centering_before_projection() {
        let cfg = PreprocessConfig {
            project_to_sphere: false,
            ..Default::default()
        };
        let c = preprocess(&gaussian(500, 4, 9), &cfg).unwrap();
        for m in c.points.column_means() {
            assert!(m.abs() < 1e-8);
        }
    }

    #[test]
    fn invalid_config() {
        let cfg = PreprocessConfig {
            condition_threshold: 1.0,
            ..Default::default()
        };
        assert!(preprocess(&gaussian(10, 2, 1), &cfg).is_err());
    }
}
