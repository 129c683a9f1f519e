//! Benchmark battery: synthetic datasets with known dimension, scored with
//! FisherS and the correlation dimension.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::baselines::{correlation_dimension_with, BenchmarkReport, BenchmarkRow, CorrelationConfig};
use crate::error::{FisherError, Result};
use crate::estimator::Estimator;
use crate::separability::AlphaGrid;
use crate::synthdata::{generate, SyntheticSpec};

/// Noise added to every default battery dataset.
pub const BATTERY_NOISE: f64 = 0.05;

/// Points per default battery dataset.
pub const BATTERY_CARDINALITY: usize = 2500;

/// Alpha grid for the battery, `0.20:0.98:0.02`. The default grid starts at
/// 0.6, where a 2500-point sample of a 70-cube is already fully separable.
pub fn battery_grid() -> AlphaGrid {
    AlphaGrid::from_range(0.2, 0.98, 0.02).expect("static grid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryEntry {
    pub name: String,
    pub true_dim: f64,
    pub spec: SyntheticSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Battery {
    pub entries: Vec<BatteryEntry>,
}

impl Battery {
    /// Spheres `S^n` in `R^(n+1)` for n in {2, 5, 10, 20}, cubes of
    /// dimension 10, 17, 20, 24 and 70, and the 1-D curve in `R^13`, each
    /// with 2500 points and noise sigma 0.05. Dataset `i` uses `seed + i`.
    pub fn standard(seed: u64) -> Self {
        let n = BATTERY_CARDINALITY;
        let mut specs = Vec::new();
        for d in [2, 5, 10, 20] {
            specs.push((format!("sphere{d}"), d as f64, SyntheticSpec::sphere(d, n, 0)));
        }
        for (d, embed) in [(10, 11), (17, 18), (20, 20), (24, 25), (70, 71)] {
            specs.push((format!("cube{d}"), d as f64, SyntheticSpec::cube(d, embed, n, 0)));
        }
        specs.push(("curve".to_string(), 1.0, SyntheticSpec::curve(13, n, 0)));
        let entries = specs
            .into_iter()
            .enumerate()
            .map(|(i, (name, true_dim, spec))| BatteryEntry {
                name,
                true_dim,
                spec: SyntheticSpec {
                    seed: seed.wrapping_add(i as u64),
                    ..spec.with_noise(BATTERY_NOISE)
                },
            })
            .collect();
        Self { entries }
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(FisherError::Usage("benchmark battery is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(e.name.as_str()) {
                return Err(FisherError::Spec(format!("duplicate dataset name '{}'", e.name)));
            }
            if !(e.true_dim > 0.0) {
                return Err(FisherError::Spec(format!(
                    "dataset '{}' needs a positive true dimension",
                    e.name
                )));
            }
            e.spec.validate()?;
        }
        Ok(())
    }
}

/// Runs both estimators on one entry. Failures are recorded in the row.
pub fn run_entry(entry: &BatteryEntry, fisher: &Estimator, cd: &CorrelationConfig) -> BenchmarkRow {
    let mut row = BenchmarkRow {
        name: entry.name.clone(),
        cardinality: entry.spec.cardinality,
        embed_dim: entry.spec.embed_dim,
        true_dim: entry.true_dim,
        fisher: None,
        retained_k: None,
        cd: None,
        errors: Vec::new(),
    };
    let x = match generate(&entry.spec) {
        Ok(x) => x,
        Err(e) => {
            row.errors.push(format!("generate: {e}"));
            return row;
        }
    };
    match fisher.estimate(&x) {
        Ok(est) => {
            row.fisher = Some(est.n_hat());
            row.retained_k = Some(est.k());
        }
        Err(e) => row.errors.push(format!("FisherS: {e}")),
    }
    match correlation_dimension_with(&x, cd) {
        Ok(c) => row.cd = Some(c.dimension()),
        Err(e) => row.errors.push(format!("CD: {e}")),
    }
    row
}

pub fn run_battery(battery: &Battery, fisher: &Estimator, cd: &CorrelationConfig) -> Result<BenchmarkReport> {
    battery.validate()?;
    let rows = battery.entries.iter().map(|e| run_entry(e, fisher, cd)).collect();
    BenchmarkReport::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_battery_layout() {
        let b = Battery::standard(100);
        b.validate().unwrap();
        assert_eq!(b.entries.len(), 10);
        assert_eq!(b.entries[0].spec.embed_dim, 3);
        assert_eq!(b.entries[8].spec.embed_dim, 71);
        assert_eq!(b.entries[9].spec.seed, 109);
        assert!(b.entries.iter().all(|e| e.spec.noise_sigma == BATTERY_NOISE));
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(serde_json::from_str::<Battery>(&json).unwrap(), b);
    }

    #[test]
    fn empty_and_duplicate_batteries() {
        let empty = Battery { entries: vec![] };
        assert!(matches!(empty.validate(), Err(FisherError::Usage(_))));
        let mut dup = Battery::standard(0);
        dup.entries[1].name = dup.entries[0].name.clone();
        assert!(matches!(dup.validate(), Err(FisherError::Spec(_))));
    }

    #[test]
    fn failures_stay_in_their_row() {
        let mut b = Battery::standard(0);
        b.entries.truncate(1);
        b.entries[0].spec.cardinality = 200;
        let mut bad = b.entries[0].clone();
        bad.name = "bad".into();
        // a rank-1 cloud cannot keep two components
        bad.spec = SyntheticSpec::cube(1, 3, 200, 3);
        b.entries.push(bad);
        let report = run_battery(&b, &Estimator::default(), &CorrelationConfig::default()).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows[0].fisher.is_some());
        assert!(report.rows[1].fisher.is_none());
        assert!(!report.rows[1].errors.is_empty());
        assert!(report.mean_pct_error.contains_key("FisherS"));
    }
}
