//! Correlation dimension next to FisherS on the same datasets.

use fisher_dim::baselines::correlation_dimension;
use fisher_dim::synthdata::{generate, SyntheticSpec};
use fisher_dim::Estimator;

fn main() -> fisher_dim::Result<()> {
    let est = Estimator::default();
    println!("{:<10} {:>6} {:>8} {:>8} {:>10}", "dataset", "truth", "CD", "FisherS", "fit range");
    for (name, truth, spec) in [
        ("curve", 1, SyntheticSpec::curve(13, 2000, 1)),
        ("sphere3", 3, SyntheticSpec::sphere(3, 2000, 2)),
        ("cube6", 6, SyntheticSpec::cube(6, 8, 2000, 3)),
    ] {
        let x = generate(&spec.with_noise(0.01))?;
        let cd = correlation_dimension(&x)?;
        let fs = est.estimate(&x)?;
        let (a, b) = cd.fit_range;
        println!(
            "{:<10} {:>6} {:>8.2} {:>8.2} {:>4}..{:<4}",
            name,
            truth,
            cd.dimension(),
            fs.n_hat(),
            a,
            b
        );
    }
    Ok(())
}
