//! Runs the standard battery of synthetic datasets through FisherS and the
//! correlation dimension and prints the comparison table.
//!
//! Pass a smaller cardinality as the first argument for a quick run.

use fisher_dim::baselines::CorrelationConfig;
use fisher_dim::battery::{battery_grid, run_battery, Battery};
use fisher_dim::io::fmt_opt;
use fisher_dim::Estimator;

fn main() -> fisher_dim::Result<()> {
    let mut battery = Battery::standard(0);
    if let Some(n) = std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        battery.entries.iter_mut().for_each(|e| e.spec.cardinality = n);
    }
    let est = Estimator::default().with_grid(battery_grid());
    let report = run_battery(&battery, &est, &CorrelationConfig::default())?;

    println!("{:<9} {:>5} {:>4} {:>5} {:>8} {:>8}", "dataset", "M", "N", "n", "FisherS", "CD");
    for r in &report.rows {
        println!(
            "{:<9} {:>5} {:>4} {:>5} {:>8} {:>8}",
            r.name,
            r.cardinality,
            r.embed_dim,
            r.true_dim,
            fmt_opt(r.fisher.map(|v| (v * 100.0).round() / 100.0)),
            fmt_opt(r.cd.map(|v| (v * 100.0).round() / 100.0)),
        );
    }
    for (name, err) in &report.mean_pct_error {
        println!("mean % error {name}: {err:.2}");
    }
    Ok(())
}
