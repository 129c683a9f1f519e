//! Seeded benchmark datasets.
//!
//! Every generator draws from a ChaCha8 stream seeded with the spec's
//! 64-bit seed and a fixed per-call-site stream id, so the sphere, cube,
//! curve, cluster, rotation and noise draws of one spec never share random
//! numbers. Ports to other languages reproduce the statistics of these
//! datasets, not the bit streams.
//!
//! Families:
//!
//! * `sphere`: uniform on `S^n` in `R^(n+1)`, via normalized standard
//!   Gaussian vectors.
//! * `cube`: uniform on `[0, 1]^n`.
//! * `curve`: `t ~ U[0, 1]` mapped to `x_m(t) = sin(2 pi (m + 1) t) / (m + 1)`
//!   for `m = 0 .. min(D, 13) - 1`, the remaining coordinates zero. The
//!   harmonics are orthogonal, so coordinate `m` carries variance
//!   `1 / (2 (m + 1)^2)`.
//! * `clustered`: a background of `ceil((1 - fraction) N)` points uniform in
//!   `[0, 1]^n` plus the remaining points split evenly over `cluster_count`
//!   balls of radius `cluster_radius` whose centers are uniform in
//!   `[0, 1]^n`. Ball points use a Gaussian direction and radius
//!   `r U^(1/n)`.
//!
//! All families are zero-padded to the embedding dimension `D`, optionally
//! rotated by a Haar-random orthogonal matrix, and then receive isotropic
//! `N(0, sigma^2)` noise on all `D` coordinates.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{FisherError, Result};
use crate::matrix::DataMatrix;

/// Number of coordinates the curve occupies at most.
pub const CURVE_COORDINATES: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldKind {
    Sphere,
    Cube,
    Curve,
    Clustered,
}

impl std::str::FromStr for ManifoldKind {
    type Err = FisherError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" => Ok(Self::Sphere),
            "cube" => Ok(Self::Cube),
            "curve" => Ok(Self::Curve),
            "clustered" => Ok(Self::Clustered),
            other => Err(FisherError::Spec(format!("unknown manifold kind '{other}'"))),
        }
    }
}

// stream ids
const STREAM_SHAPE: u64 = 1;
const STREAM_CENTERS: u64 = 2;
const STREAM_ROTATION: u64 = 3;
const STREAM_NOISE: u64 = 4;

/// Declarative recipe for a synthetic dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub kind: ManifoldKind,
    pub intrinsic_dim: usize,
    pub embed_dim: usize,
    pub cardinality: usize,
    #[serde(default)]
    pub noise_sigma: f64,
    pub seed: u64,
    #[serde(default)]
    pub rotate: bool,
    #[serde(default = "default_cluster_count")]
    pub cluster_count: usize,
    #[serde(default = "default_cluster_radius")]
    pub cluster_radius: f64,
    #[serde(default = "default_cluster_fraction")]
    pub cluster_fraction: f64,
}

fn default_cluster_count() -> usize {
    10
}
fn default_cluster_radius() -> f64 {
    0.1
}
fn default_cluster_fraction() -> f64 {
    0.3
}

impl SyntheticSpec {
    fn base(kind: ManifoldKind, intrinsic_dim: usize, embed_dim: usize, cardinality: usize, seed: u64) -> Self {
        Self {
            kind,
            intrinsic_dim,
            embed_dim,
            cardinality,
            noise_sigma: 0.0,
            seed,
            rotate: false,
            cluster_count: default_cluster_count(),
            cluster_radius: default_cluster_radius(),
            cluster_fraction: default_cluster_fraction(),
        }
    }

    /// `S^n` embedded in `R^(n+1)`.
    pub fn sphere(n: usize, cardinality: usize, seed: u64) -> Self {
        Self::base(ManifoldKind::Sphere, n, n + 1, cardinality, seed)
    }

    pub fn cube(n: usize, embed_dim: usize, cardinality: usize, seed: u64) -> Self {
        Self::base(ManifoldKind::Cube, n, embed_dim, cardinality, seed)
    }

    pub fn curve(embed_dim: usize, cardinality: usize, seed: u64) -> Self {
        Self::base(ManifoldKind::Curve, 1, embed_dim, cardinality, seed)
    }

    /// Ten `n`-balls of the given radius mixed into a uniform `n`-cube.
    pub fn clustered(n: usize, radius: f64, cardinality: usize, seed: u64) -> Self {
        Self {
            cluster_radius: radius,
            ..Self::base(ManifoldKind::Clustered, n, n, cardinality, seed)
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_embed_dim(mut self, d: usize) -> Self {
        self.embed_dim = d;
        self
    }

    pub fn with_rotation(mut self, rotate: bool) -> Self {
        self.rotate = rotate;
        self
    }

    pub fn with_fraction(mut self, fraction: f64) -> Self {
        self.cluster_fraction = fraction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(FisherError::Spec(m));
        if self.cardinality < 2 {
            return err(format!("cardinality must be >= 2, got {}", self.cardinality));
        }
        if self.intrinsic_dim < 1 {
            return err("intrinsic dimension must be >= 1".into());
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return err(format!("noise sigma must be >= 0, got {}", self.noise_sigma));
        }
        let min_embed = match self.kind {
            ManifoldKind::Sphere => self.intrinsic_dim + 1,
            ManifoldKind::Cube | ManifoldKind::Clustered => self.intrinsic_dim,
            ManifoldKind::Curve => {
                if self.intrinsic_dim != 1 {
                    return err("a curve has intrinsic dimension 1".into());
                }
                3
            }
        };
        if self.embed_dim < min_embed {
            return err(format!(
                "{:?} of dimension {} needs embedding dimension >= {min_embed}, got {}",
                self.kind, self.intrinsic_dim, self.embed_dim
            ));
        }
        if self.kind == ManifoldKind::Clustered {
            if self.cluster_count == 0 {
                return err("cluster count must be positive".into());
            }
            if !(self.cluster_radius > 0.0) {
                return err(format!("cluster radius must be > 0, got {}", self.cluster_radius));
            }
            if !(0.0..=1.0).contains(&self.cluster_fraction) {
                return err(format!(
                    "cluster fraction must lie in [0, 1], got {}",
                    self.cluster_fraction
                ));
            }
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

fn expect_kind(spec: &SyntheticSpec, kind: ManifoldKind) -> Result<()> {
    if spec.kind != kind {
        return Err(FisherError::Spec(format!(
            "expected a {kind:?} spec, got {:?}",
            spec.kind
        )));
    }
    spec.validate()
}

fn padded(n_points: usize, d: usize, width: usize, mut fill: impl FnMut(&mut [f64])) -> Vec<f64> {
    let mut v = vec![0.0; n_points * d];
    for row in v.chunks_exact_mut(d) {
        fill(&mut row[..width]);
    }
    v
}

fn finish(spec: &SyntheticSpec, values: Vec<f64>) -> Result<DataMatrix> {
    let x = DataMatrix::new(spec.cardinality, spec.embed_dim, values)?;
    Ok(if spec.rotate {
        x.multiply_square(&random_rotation(spec.embed_dim, spec.seed))
    } else {
        x
    })
}

/// Haar-distributed `d x d` orthogonal matrix, row-major.
pub fn random_rotation(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_ROTATION);
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| StandardNormal.sample(&mut rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..d {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.extend(q.row(i).iter());
    }
    out
}

fn unit_gaussian_direction(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        let mut norm2 = 0.0;
        for v in out.iter_mut() {
            *v = StandardNormal.sample(rng);
            norm2 += *v * *v;
        }
        if norm2 > 0.0 {
            let norm = norm2.sqrt();
            out.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

/// Uniform points on `S^n` in the first `n + 1` coordinates.
pub fn sample_sphere(spec: &SyntheticSpec) -> Result<DataMatrix> {
    expect_kind(spec, ManifoldKind::Sphere)?;
    let mut rng = spec.rng(STREAM_SHAPE);
    let v = padded(spec.cardinality, spec.embed_dim, spec.intrinsic_dim + 1, |r| {
        unit_gaussian_direction(&mut rng, r)
    });
    finish(spec, v)
}

/// Uniform points in `[0, 1]^n` in the first `n` coordinates.
pub fn sample_cube(spec: &SyntheticSpec) -> Result<DataMatrix> {
    expect_kind(spec, ManifoldKind::Cube)?;
    let mut rng = spec.rng(STREAM_SHAPE);
    let v = padded(spec.cardinality, spec.embed_dim, spec.intrinsic_dim, |r| {
        r.iter_mut().for_each(|x| *x = rng.random::<f64>())
    });
    finish(spec, v)
}

/// Image of `t` on the curve, written into `out` (length at most 13 used).
pub fn curve_point(t: f64, out: &mut [f64]) {
    for (m, x) in out.iter_mut().enumerate() {
        let f = (m + 1) as f64;
        *x = (2.0 * std::f64::consts::PI * f * t).sin() / f;
    }
}

pub fn sample_curve(spec: &SyntheticSpec) -> Result<DataMatrix> {
    expect_kind(spec, ManifoldKind::Curve)?;
    let mut rng = spec.rng(STREAM_SHAPE);
    let width = spec.embed_dim.min(CURVE_COORDINATES);
    let v = padded(spec.cardinality, spec.embed_dim, width, |r| {
        curve_point(rng.random::<f64>(), r)
    });
    finish(spec, v)
}

/// Cube background plus uniform balls around random centers.
pub fn sample_clustered(spec: &SyntheticSpec) -> Result<DataMatrix> {
    expect_kind(spec, ManifoldKind::Clustered)?;
    let n = spec.intrinsic_dim;
    let total = spec.cardinality;
    let background = (((1.0 - spec.cluster_fraction) * total as f64).ceil() as usize).min(total);
    let in_clusters = total - background;

    let mut center_rng = spec.rng(STREAM_CENTERS);
    let centers: Vec<Vec<f64>> = (0..spec.cluster_count)
        .map(|_| (0..n).map(|_| center_rng.random::<f64>()).collect())
        .collect();

    let mut rng = spec.rng(STREAM_SHAPE);
    let per = in_clusters / spec.cluster_count;
    let extra = in_clusters % spec.cluster_count;
    let mut owner = Vec::with_capacity(total);
    owner.extend(std::iter::repeat_n(None, background));
    for c in 0..spec.cluster_count {
        owner.extend(std::iter::repeat_n(Some(c), per + usize::from(c < extra)));
    }
    let mut it = owner.into_iter();
    let inv_n = 1.0 / n as f64;
    let v = padded(total, spec.embed_dim, n, |r| match it.next().flatten() {
        None => r.iter_mut().for_each(|x| *x = rng.random::<f64>()),
        Some(c) => {
            unit_gaussian_direction(&mut rng, r);
            let radius = spec.cluster_radius * rng.random::<f64>().powf(inv_n);
            for (x, m) in r.iter_mut().zip(&centers[c]) {
                *x = m + radius * *x;
            }
        }
    });
    finish(spec, v)
}

/// Adds i.i.d. `N(0, sigma^2)` to every entry.
pub fn add_noise(x: &DataMatrix, sigma: f64, seed: u64) -> Result<DataMatrix> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(FisherError::Spec(format!("noise sigma must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(x.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_NOISE);
    let normal = Normal::new(0.0, sigma).expect("sigma checked");
    let v = x.as_slice().iter().map(|v| v + normal.sample(&mut rng)).collect();
    DataMatrix::new(x.n_points(), x.n_features(), v)
}

/// Clean sample for the spec's family followed by its noise.
pub fn generate(spec: &SyntheticSpec) -> Result<DataMatrix> {
    let clean = match spec.kind {
        ManifoldKind::Sphere => sample_sphere(spec),
        ManifoldKind::Cube => sample_cube(spec),
        ManifoldKind::Curve => sample_curve(spec),
        ManifoldKind::Clustered => sample_clustered(spec),
    }?;
    add_noise(&clean, spec.noise_sigma, spec.seed)
}
