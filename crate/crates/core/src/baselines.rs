//! Correlation-dimension baseline and benchmark scoring.
//!
//! The correlation sum is
//!
//! ```text
//! C(r) = 2 / (N (N - 1)) * #{ i < j : ||x_i - x_j|| < r }
//! ```
//!
//! and the correlation dimension is the slope of `log C(r)` against
//! `log r`. The slope is fitted on a log-spaced radius grid between two
//! percentiles of the pairwise distances, over the contiguous window of at
//! least `min_window_fraction` of the grid with the smallest mean squared
//! residual; ties go to the wider window.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FisherError, Result};
use crate::matrix::{squared_distance, DataMatrix};
use crate::separability::kernel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationConfig {
    pub n_radii: usize,
    /// Percentiles of the pairwise distance distribution bounding the grid.
    pub lower_percentile: f64,
    pub upper_percentile: f64,
    pub min_window_fraction: f64,
    /// Above this many points the percentiles come from a seeded subsample.
    pub percentile_subsample: usize,
    pub seed: u64,
    pub block_size: usize,
    pub threads: Option<usize>,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        Self {
            n_radii: 20,
            lower_percentile: 1.0,
            upper_percentile: 75.0,
            min_window_fraction: 0.5,
            percentile_subsample: 2000,
            seed: 0,
            block_size: 64,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub radii: Vec<f64>,
    pub corr_sums: Vec<f64>,
    /// Inclusive start and exclusive end into `radii`.
    pub fit_range: (usize, usize),
    pub slope: f64,
}

impl CorrelationCurve {
    pub fn dimension(&self) -> f64 {
        self.slope
    }
}

fn pair_count(n: usize) -> f64 {
    n as f64 * (n as f64 - 1.0) / 2.0
}

/// Fraction of point pairs closer than `r`.
pub fn correlation_sum(x: &DataMatrix, r: f64) -> f64 {
    if !(r > 0.0) {
        return 0.0;
    }
    let counts = kernel::pair_distance_counts(x, &[r], 64);
    counts[0] as f64 / pair_count(x.n_points())
}

/// Correlation sums on a sorted radius grid, from one pass over the pairs.
pub fn correlation_sums(x: &DataMatrix, radii: &[f64], block_size: usize) -> Vec<f64> {
    if radii.is_empty() {
        return Vec::new();
    }
    let pairs = pair_count(x.n_points());
    kernel::pair_distance_counts(x, radii, block_size)
        .into_iter()
        .map(|c| c as f64 / pairs)
        .collect()
}

/// Linear-interpolated percentile of sorted data, `q` in `[0, 100]`.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

fn distance_percentiles(x: &DataMatrix, cfg: &CorrelationConfig) -> (f64, f64) {
    let n = x.n_points();
    let idx: Vec<usize> = if n > cfg.percentile_subsample {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut v = rand::seq::index::sample(&mut rng, n, cfg.percentile_subsample).into_vec();
        v.sort_unstable();
        v
    } else {
        (0..n).collect()
    };
    let mut d = Vec::with_capacity(idx.len() * (idx.len() - 1) / 2);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            d.push(squared_distance(x.row(i), x.row(j)).sqrt());
        }
    }
    d.sort_unstable_by(f64::total_cmp);
    (percentile(&d, cfg.lower_percentile), percentile(&d, cfg.upper_percentile))
}

/// Least-squares slope and mean squared residual of `y` on `x`.
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let mse = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - icpt).powi(2))
        .sum::<f64>()
        / n;
    (slope, mse)
}

pub fn correlation_dimension(x: &DataMatrix) -> Result<CorrelationCurve> {
    correlation_dimension_with(x, &CorrelationConfig::default())
}

pub fn correlation_dimension_with(x: &DataMatrix, cfg: &CorrelationConfig) -> Result<CorrelationCurve> {
    if x.n_points() < 10 {
        return Err(FisherError::InvalidInput(format!(
            "correlation dimension needs at least 10 points, got {}",
            x.n_points()
        )));
    }
    if cfg.n_radii < 3 || !(cfg.lower_percentile < cfg.upper_percentile) {
        return Err(FisherError::InvalidInput("bad correlation radius grid".into()));
    }
    let (lo, hi) = distance_percentiles(x, cfg);
    if !(hi > 0.0) {
        return Err(FisherError::Degenerate("all points coincide".into()));
    }
    // the lower percentile may be a zero distance when points repeat
    let lo = if lo > 0.0 { lo } else { hi * 1e-3 };
    let steps = (cfg.n_radii - 1) as f64;
    let radii: Vec<f64> = (0..cfg.n_radii)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / steps).exp())
        .collect();
    let sums = kernel::with_threads(cfg.threads, || correlation_sums(x, &radii, cfg.block_size))?;

    let usable: Vec<usize> = (0..radii.len()).filter(|&i| sums[i] > 0.0).collect();
    let first = *usable.first().ok_or_else(|| {
        FisherError::Degenerate("no pairs within the radius grid".into())
    })?;
    let log_r: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let log_c: Vec<f64> = sums.iter().map(|c| c.ln()).collect();
    let available = radii.len() - first;
    let min_len = ((cfg.n_radii as f64 * cfg.min_window_fraction).ceil() as usize)
        .clamp(2, available.max(2));
    if available < 2 {
        return Err(FisherError::Degenerate("too few positive correlation sums".into()));
    }

    let mut best: Option<(f64, f64, usize, usize)> = None;
    for len in (min_len.min(available)..=available).rev() {
        for start in first..=(radii.len() - len) {
            let end = start + len;
            let (slope, mse) = fit_line(&log_r[start..end], &log_c[start..end]);
            if best.is_none_or(|b| mse < b.0) {
                best = Some((mse, slope, start, end));
            }
        }
    }
    let (_, slope, start, end) = best.expect("at least one window");
    Ok(CorrelationCurve {
        radii,
        corr_sums: sums,
        fit_range: (start, end),
        slope,
    })
}

/// `100 / M * sum_i |n_hat_i - n_i| / n_i` over matching dataset keys.
pub fn mean_percentage_error(
    estimates: &BTreeMap<String, f64>,
    truths: &BTreeMap<String, f64>,
) -> Result<f64> {
    if estimates.len() != truths.len() || estimates.keys().any(|k| !truths.contains_key(k)) {
        return Err(FisherError::Contract(
            "estimates and true dimensions must cover the same datasets".into(),
        ));
    }
    if estimates.is_empty() {
        return Err(FisherError::Contract("no datasets to score".into()));
    }
    let mut total = 0.0;
    for (k, est) in estimates {
        let truth = truths[k];
        if !(truth > 0.0) {
            return Err(FisherError::Contract(format!(
                "true dimension of {k} must be positive, got {truth}"
            )));
        }
        total += (est - truth).abs() / truth;
    }
    Ok(100.0 * total / estimates.len() as f64)
}

/// Per-estimator results for one benchmark dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub name: String,
    pub cardinality: usize,
    pub embed_dim: usize,
    pub true_dim: f64,
    pub fisher: Option<f64>,
    pub retained_k: Option<usize>,
    pub cd: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
    /// Keyed by estimator name (`FisherS`, `CD`), over the rows where that
    /// estimator produced a value.
    pub mean_pct_error: BTreeMap<String, f64>,
}

impl BenchmarkReport {
    pub fn from_rows(rows: Vec<BenchmarkRow>) -> Result<Self> {
        let mut mean_pct_error = BTreeMap::new();
        for (name, pick) in [
            ("FisherS", (|r: &BenchmarkRow| r.fisher) as fn(&BenchmarkRow) -> Option<f64>),
            ("CD", |r: &BenchmarkRow| r.cd),
        ] {
            let mut est = BTreeMap::new();
            let mut truth = BTreeMap::new();
            for r in &rows {
                if let Some(v) = pick(r) {
                    est.insert(r.name.clone(), v);
                    truth.insert(r.name.clone(), r.true_dim);
                }
            }
            if !est.is_empty() {
                mean_pct_error.insert(name.to_string(), mean_percentage_error(&est, &truth)?);
            }
        }
        Ok(Self {
            rows,
            mean_pct_error,
        })
    }
}
