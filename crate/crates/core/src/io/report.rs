use std::path::Path;

use serde::{Deserialize, Serialize};

use super::mutation::MutationSummary;
use super::{Delimiter, Orientation};
use crate::error::Result;
use crate::estimator::{Estimator, FisherEstimate};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDescriptor {
    /// File path, or a short description for in-memory data.
    pub source: String,
    pub delimiter: Option<Delimiter>,
    pub orientation: Orientation,
    pub header: bool,
    pub n_points: usize,
    pub n_features: usize,
    pub mutation: Option<MutationSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessSummary {
    pub condition_threshold: f64,
    pub projected_to_sphere: bool,
    pub k: usize,
    pub retained_eigenvalues: Vec<f64>,
    /// `lambda_1 / lambda_i` for each retained component.
    pub retained_eigenvalue_ratios: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub mean_prob: f64,
    pub n_alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    pub preprocess_seconds: f64,
    pub sweep_seconds: f64,
    pub total_seconds: f64,
}

/// Everything needed to reproduce and audit one estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub input: InputDescriptor,
    pub preprocessing: PreprocessSummary,
    pub alpha_grid: Vec<f64>,
    pub sweep: Vec<SweepRow>,
    pub alpha_max: f64,
    pub alpha_used: f64,
    pub used_fallback: bool,
    pub n_hat: f64,
    pub seeds: Vec<u64>,
    pub timing: Timing,
}

impl RunReport {
    pub fn new(
        input: InputDescriptor,
        estimator: &Estimator,
        result: &FisherEstimate,
        seeds: Vec<u64>,
        timing: Timing,
    ) -> Self {
        let retained = result.cloud.retained_eigenvalues.clone();
        let lead = retained.first().copied().unwrap_or(f64::NAN);
        let est = &result.estimate;
        Self {
            tool_version: TOOL_VERSION.to_string(),
            input,
            preprocessing: PreprocessSummary {
                condition_threshold: estimator.preprocess.condition_threshold,
                projected_to_sphere: estimator.preprocess.project_to_sphere,
                k: result.cloud.k,
                retained_eigenvalue_ratios: retained.iter().map(|l| lead / l).collect(),
                retained_eigenvalues: retained,
            },
            alpha_grid: estimator.grid.values().to_vec(),
            sweep: est
                .profiles
                .iter()
                .map(|p| SweepRow {
                    alpha: p.alpha,
                    mean_prob: p.mean_prob,
                    n_alpha: p.dimension,
                })
                .collect(),
            alpha_max: est.alpha_max,
            alpha_used: est.alpha_used,
            used_fallback: est.used_fallback,
            n_hat: est.n_hat,
            seeds,
            timing,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The report as JSON with the timing block removed, for comparisons
    /// between runs.
    pub fn stable_json(&self) -> Result<serde_json::Value> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        Ok(v)
    }
}
