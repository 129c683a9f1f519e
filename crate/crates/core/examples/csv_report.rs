//! File round trip: write a dataset as CSV, load it back, estimate, and
//! save the JSON run report.

use std::time::Instant;

use fisher_dim::io::{load_matrix, save_matrix_csv, InputDescriptor, MatrixFile, RunReport, Timing};
use fisher_dim::preprocess::preprocess;
use fisher_dim::synthdata::{generate, SyntheticSpec};
use fisher_dim::Estimator;

fn main() -> fisher_dim::Result<()> {
    let dir = std::env::temp_dir().join("fisher_dim_csv_report");
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("cube4.csv");
    save_matrix_csv(&generate(&SyntheticSpec::cube(4, 9, 1500, 21).with_rotation(true))?, &csv)?;

    let file = MatrixFile::new(&csv);
    let x = load_matrix(&file)?;
    let est = Estimator::default();
    let t0 = Instant::now();
    let cloud = preprocess(&x, &est.preprocess)?;
    let t1 = Instant::now();
    let r = est.estimate_cloud(cloud)?;
    let t2 = Instant::now();

    let input = InputDescriptor {
        source: csv.display().to_string(),
        delimiter: Some(file.delimiter),
        orientation: file.orientation,
        header: file.header,
        n_points: x.n_points(),
        n_features: x.n_features(),
        mutation: None,
    };
    let timing = Timing {
        preprocess_seconds: (t1 - t0).as_secs_f64(),
        sweep_seconds: (t2 - t1).as_secs_f64(),
        total_seconds: (t2 - t0).as_secs_f64(),
    };
    let report = RunReport::new(input, &est, &r, vec![21], timing);
    let path = dir.join("report.json");
    report.save(&path)?;
    println!("n_hat {:.3} (k = {}), report at {}", report.n_hat, report.preprocessing.k, path.display());
    Ok(())
}
