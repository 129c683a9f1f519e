//! Uniform hypercubes of growing dimension, with and without noise.
//!
//! High-dimensional cubes are fully separable on the default grid, so the
//! wider battery grid is used here.

use fisher_dim::battery::battery_grid;
use fisher_dim::synthdata::{generate, SyntheticSpec};
use fisher_dim::Estimator;

fn main() -> fisher_dim::Result<()> {
    let est = Estimator::default().with_grid(battery_grid());
    println!("{:>4} {:>4} {:>10} {:>10}", "n", "k", "clean", "noisy");
    for (i, n) in [2usize, 5, 10, 20, 40].into_iter().enumerate() {
        let spec = SyntheticSpec::cube(n, n + 1, 2500, i as u64);
        let clean = est.estimate(&generate(&spec)?)?;
        let noisy = est.estimate(&generate(&spec.clone().with_noise(0.05))?)?;
        println!("{:>4} {:>4} {:>10.2} {:>10.2}", n, clean.k(), clean.n_hat(), noisy.n_hat());
    }
    Ok(())
}
