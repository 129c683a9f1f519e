use serde::{Deserialize, Serialize};

use crate::error::{FisherError, Result};
use crate::matrix::DataMatrix;

/// Genes with fewer mutated tumors than this are dropped.
pub const DEFAULT_MIN_COUNT: usize = 5;

/// Result of [`normalize_mutation_matrix`]. Indices refer to the input.
#[derive(Debug, Clone, PartialEq)]
pub struct MutationNormalization {
    pub matrix: DataMatrix,
    pub kept_genes: Vec<usize>,
    pub dropped_genes: Vec<usize>,
    /// Tumor columns with no mutation left after gene filtering.
    pub dropped_tumors: Vec<usize>,
}

/// Counts kept in the run report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationSummary {
    pub min_count: usize,
    pub genes_in: usize,
    pub genes_kept: usize,
    pub dropped_genes: Vec<usize>,
    pub tumors_in: usize,
    pub dropped_tumors: Vec<usize>,
}

impl MutationNormalization {
    pub fn summary(&self, genes_in: usize, tumors_in: usize, min_count: usize) -> MutationSummary {
        MutationSummary {
            min_count,
            genes_in,
            genes_kept: self.kept_genes.len(),
            dropped_genes: self.dropped_genes.clone(),
            tumors_in,
            dropped_tumors: self.dropped_tumors.clone(),
        }
    }
}

/// Prepares a genes x tumors mutation matrix.
///
/// Genes (rows) mutated in fewer than `min_count` tumors are removed. Each
/// remaining tumor column is then divided by its total, so tumors with a
/// heavy mutational load do not dominate. Columns whose total is zero after
/// filtering are dropped and listed in `dropped_tumors`.
pub fn normalize_mutation_matrix(x: &DataMatrix, min_count: usize) -> Result<MutationNormalization> {
    if let Some(v) = x.as_slice().iter().find(|v| **v < 0.0) {
        return Err(FisherError::InvalidInput(format!(
            "mutation matrix has a negative entry {v}"
        )));
    }
    if x.as_slice().iter().all(|v| *v == 0.0) {
        return Err(FisherError::Degenerate("mutation matrix is all zero".into()));
    }
    let (kept_genes, dropped_genes): (Vec<usize>, Vec<usize>) = (0..x.n_points())
        .partition(|&g| x.row(g).iter().filter(|v| **v != 0.0).count() >= min_count);
    if kept_genes.len() < 2 {
        return Err(FisherError::Degenerate(format!(
            "{} genes have at least {min_count} mutations, need 2",
            kept_genes.len()
        )));
    }
    let filtered = x.select_rows(&kept_genes)?;
    let mut totals = vec![0.0; x.n_features()];
    for r in filtered.rows() {
        for (t, v) in totals.iter_mut().zip(r) {
            *t += v;
        }
    }
    let (kept_tumors, dropped_tumors): (Vec<usize>, Vec<usize>) =
        (0..x.n_features()).partition(|&t| totals[t] > 0.0);
    let mut values = Vec::with_capacity(kept_genes.len() * kept_tumors.len());
    for r in filtered.rows() {
        values.extend(kept_tumors.iter().map(|&t| r[t] / totals[t]));
    }
    let matrix = DataMatrix::new(kept_genes.len(), kept_tumors.len(), values)?;
    Ok(MutationNormalization {
        matrix,
        kept_genes,
        dropped_genes,
        dropped_tumors,
    })
}
