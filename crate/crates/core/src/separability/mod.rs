//! Fisher separability statistics and the dimension they imply.
//!
//! A normalized point `x` is Fisher-separable from `y` with parameter
//! `alpha` when `(x, y) <= alpha (x, x)`. For each point we count the other
//! points it fails to separate from, turn the counts into an empirical
//! unseparability probability `p_alpha^j = v_j / N`, and compare the mean
//! `p_bar_alpha` with the value for a uniform distribution on the unit
//! sphere in `R^n`:
//!
//! ```text
//! p_alpha(n) = (1 - alpha^2)^((n - 1) / 2) / (alpha * sqrt(2 pi n))
//! ```
//!
//! Solving for `n` gives
//!
//! ```text
//! n_alpha = W0(-ln(1 - alpha^2) / (2 pi p^2 alpha^2 (1 - alpha^2))) / -ln(1 - alpha^2)
//! ```
//!
//! The divisor in `p_alpha^j` is `N` even though a point is never compared
//! with itself, so `p_alpha^j <= (N - 1) / N`.

pub(crate) mod kernel;

use serde::{Deserialize, Serialize};

use crate::error::{FisherError, Result};
use crate::preprocess::PreprocessedCloud;
use crate::specfun::lambert_w0_exp;

/// Default rows per stripe in the pairwise kernel.
pub const DEFAULT_BLOCK_SIZE: usize = 512;

/// Point estimates use the largest grid alpha not above this fraction of
/// `alpha_max`.
pub const ALPHA_FRACTION: f64 = 0.8;

/// Sorted separability thresholds, each strictly inside `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AlphaGrid(Vec<f64>);

impl AlphaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(FisherError::InvalidInput("alpha grid is empty".into()));
        }
        if let Some(a) = values.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(FisherError::InvalidInput(format!(
                "alpha {a} is outside (0, 1)"
            )));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FisherError::InvalidInput(
                "alpha grid must be strictly increasing".into(),
            ));
        }
        Ok(Self(values))
    }

    /// `lo, lo + step, ...` up to and including `hi` (within rounding).
    /// Values are rounded to 12 decimals so `0.6:0.98:0.02` yields exactly
    /// the decimal grid.
    pub fn from_range(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(hi >= lo) {
            return Err(FisherError::InvalidInput(format!(
                "bad alpha range {lo}:{hi}:{step}"
            )));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        let values = (0..count)
            .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
            .collect();
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for AlphaGrid {
    /// `0.60, 0.62, ..., 0.98`.
    fn default() -> Self {
        Self((30..=49).map(|i| f64::from(2 * i) / 100.0).collect())
    }
}

impl TryFrom<Vec<f64>> for AlphaGrid {
    type Error = FisherError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AlphaGrid> for Vec<f64> {
    fn from(g: AlphaGrid) -> Self {
        g.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub block_size: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Reject clouds that were not projected onto the unit sphere.
    pub require_sphere: bool,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            block_size: DEFAULT_BLOCK_SIZE,
            threads: None,
            require_sphere: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityProfile {
    pub alpha: f64,
    pub point_probs: Vec<f64>,
    pub mean_prob: f64,
    /// `None` when every point is separable at this alpha.
    pub dimension: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub n_hat: f64,
    pub alpha_used: f64,
    pub alpha_max: f64,
    /// Set when no grid alpha below `0.8 alpha_max` had a nonzero mean and
    /// the smallest alpha with a nonzero mean was used instead.
    pub used_fallback: bool,
    pub profiles: Vec<SeparabilityProfile>,
}

impl DimensionEstimate {
    pub fn profile_used(&self) -> &SeparabilityProfile {
        self.profiles
            .iter()
            .find(|p| p.alpha == self.alpha_used)
            .expect("alpha_used comes from the profiles")
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(FisherError::Domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn check_cloud(cloud: &PreprocessedCloud, cfg: &KernelConfig) -> Result<()> {
    if cfg.require_sphere && !cloud.on_sphere {
        return Err(FisherError::Contract(
            "separability counts require a cloud projected onto the unit sphere".into(),
        ));
    }
    if cfg.block_size == 0 {
        return Err(FisherError::InvalidInput("block size must be positive".into()));
    }
    Ok(())
}

/// Per-point unseparability counts for a single alpha.
pub fn unseparability_counts(cloud: &PreprocessedCloud, alpha: f64) -> Result<Vec<u32>> {
    unseparability_counts_with(cloud, alpha, &KernelConfig::default())
}

pub fn unseparability_counts_with(
    cloud: &PreprocessedCloud,
    alpha: f64,
    cfg: &KernelConfig,
) -> Result<Vec<u32>> {
    check_alpha(alpha)?;
    check_cloud(cloud, cfg)?;
    kernel::with_threads(cfg.threads, || {
        kernel::exceedance_counts(&cloud.points, &[alpha], cfg.block_size)
    })
}

fn profile_from_counts(alpha: f64, counts: impl Iterator<Item = u32>, n: usize) -> Result<SeparabilityProfile> {
    let nf = n as f64;
    let point_probs: Vec<f64> = counts.map(|v| f64::from(v) / nf).collect();
    let mean_prob = point_probs.iter().sum::<f64>() / nf;
    let dimension = if mean_prob > 0.0 {
        Some(dimension_from_p(mean_prob, alpha)?)
    } else {
        None
    };
    Ok(SeparabilityProfile {
        alpha,
        point_probs,
        mean_prob,
        dimension,
    })
}

/// Empirical unseparability probabilities at one alpha, with the implied
/// dimension filled in when the mean is positive.
pub fn point_unseparability(cloud: &PreprocessedCloud, alpha: f64) -> Result<SeparabilityProfile> {
    let counts = unseparability_counts(cloud, alpha)?;
    profile_from_counts(alpha, counts.into_iter(), cloud.points.n_points())
}

/// Mean unseparability probability of the uniform distribution on the unit
/// sphere in `R^n`.
pub fn theoretical_p_alpha(n: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(n >= 1.0) {
        return Err(FisherError::Domain(format!("dimension must be >= 1, got {n}")));
    }
    let a2 = alpha * alpha;
    Ok((1.0 - a2).powf((n - 1.0) / 2.0) / (alpha * (2.0 * std::f64::consts::PI * n).sqrt()))
}

/// Inverts [`theoretical_p_alpha`] in `n`.
///
/// `p_bar <= 0` means every point was separable and yields
/// [`FisherError::FullySeparable`].
pub fn dimension_from_p(p_bar: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if p_bar.is_nan() || p_bar > 1.0 {
        return Err(FisherError::Contract(format!(
            "mean unseparability probability must lie in (0, 1], got {p_bar}"
        )));
    }
    if p_bar <= 0.0 {
        return Err(FisherError::FullySeparable);
    }
    let a2 = alpha * alpha;
    let neg_log = -(-a2).ln_1p();
    // log of the argument; p_bar^2 underflows for very small probabilities
    let ln_arg = neg_log.ln() - (2.0 * std::f64::consts::PI * a2 * (1.0 - a2)).ln() - 2.0 * p_bar.ln();
    Ok(lambert_w0_exp(ln_arg)? / neg_log)
}

/// Profiles for every alpha of the grid from a single pass over the pairs.
pub fn alpha_sweep(cloud: &PreprocessedCloud, grid: &AlphaGrid) -> Result<Vec<SeparabilityProfile>> {
    alpha_sweep_with(cloud, grid, &KernelConfig::default())
}

pub fn alpha_sweep_with(
    cloud: &PreprocessedCloud,
    grid: &AlphaGrid,
    cfg: &KernelConfig,
) -> Result<Vec<SeparabilityProfile>> {
    check_cloud(cloud, cfg)?;
    let alphas = grid.values();
    let m = alphas.len();
    let n = cloud.points.n_points();
    let counts = kernel::with_threads(cfg.threads, || {
        kernel::exceedance_counts(&cloud.points, alphas, cfg.block_size)
    })?;
    alphas
        .iter()
        .enumerate()
        .map(|(idx, &a)| profile_from_counts(a, (0..n).map(|j| counts[j * m + idx]), n))
        .collect()
}

/// Picks the point estimate from a sweep: `alpha_max` is the largest alpha
/// with a positive mean, and the estimate is read at the largest grid alpha
/// not exceeding `0.8 alpha_max`.
pub fn select_estimate(profiles: Vec<SeparabilityProfile>) -> Result<DimensionEstimate> {
    let alpha_max = profiles
        .iter()
        .filter(|p| p.mean_prob > 0.0)
        .map(|p| p.alpha)
        .fold(f64::NEG_INFINITY, f64::max);
    if alpha_max == f64::NEG_INFINITY {
        return Err(FisherError::FullySeparable);
    }
    // slack for products like 0.8 * 0.75 landing one ulp above 0.6
    let target = ALPHA_FRACTION * alpha_max + 1e-12;
    let chosen = profiles
        .iter()
        .filter(|p| p.alpha <= target && p.mean_prob > 0.0)
        .max_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let (used, used_fallback) = match chosen {
        Some(p) => (p, false),
        None => (
            profiles
                .iter()
                .filter(|p| p.mean_prob > 0.0)
                .min_by(|a, b| a.alpha.total_cmp(&b.alpha))
                .expect("alpha_max exists"),
            true,
        ),
    };
    let alpha_used = used.alpha;
    let n_hat = match used.dimension {
        Some(d) => d,
        None => dimension_from_p(used.mean_prob, used.alpha)?,
    };
    Ok(DimensionEstimate {
        n_hat,
        alpha_used,
        alpha_max,
        used_fallback,
        profiles,
    })
}
