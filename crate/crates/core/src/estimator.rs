//! End-to-end FisherS estimate: preprocess, sweep the alpha grid, pick `n_hat`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::DataMatrix;
use crate::preprocess::{preprocess, PreprocessConfig, PreprocessedCloud};
use crate::separability::{alpha_sweep_with, select_estimate, AlphaGrid, DimensionEstimate, KernelConfig};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimator {
    pub preprocess: PreprocessConfig,
    pub grid: AlphaGrid,
    pub kernel: KernelConfig,
}

#[derive(Debug, Clone)]
pub struct FisherEstimate {
    pub cloud: PreprocessedCloud,
    pub estimate: DimensionEstimate,
}

impl FisherEstimate {
    pub fn n_hat(&self) -> f64 {
        self.estimate.n_hat
    }

    pub fn k(&self) -> usize {
        self.cloud.k
    }
}

impl Estimator {
    pub fn with_grid(mut self, grid: AlphaGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.kernel.threads = threads;
        self
    }

    /// Skips the sphere projection; the kernel then works on whitened points.
    pub fn without_sphere(mut self) -> Self {
        self.preprocess.project_to_sphere = false;
        self.kernel.require_sphere = false;
        self
    }

    pub fn estimate(&self, x: &DataMatrix) -> Result<FisherEstimate> {
        let cloud = preprocess(x, &self.preprocess)?;
        self.estimate_cloud(cloud)
    }

    /// Runs the sweep on an already preprocessed cloud.
    pub fn estimate_cloud(&self, cloud: PreprocessedCloud) -> Result<FisherEstimate> {
        let profiles = alpha_sweep_with(&cloud, &self.grid, &self.kernel)?;
        let estimate = select_estimate(profiles)?;
        Ok(FisherEstimate { cloud, estimate })
    }
}

/// FisherS estimate with the default configuration.
pub fn estimate_dimension(x: &DataMatrix) -> Result<f64> {
    Ok(Estimator::default().estimate(x)?.n_hat())
}
