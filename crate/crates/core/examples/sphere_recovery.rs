//! Recovers the dimension of uniformly sampled spheres.
//!
//! A uniform sample of the unit sphere in `R^n` reads as `n`.
//!
//! ```text
//! cargo run --release --example sphere_recovery
//! ```

use fisher_dim::synthdata::{generate, SyntheticSpec};
use fisher_dim::Estimator;

fn main() -> fisher_dim::Result<()> {
    let est = Estimator::default();
    println!("{:>4} {:>6} {:>4} {:>9} {:>9}", "n", "N", "k", "alpha", "n_hat");
    for n in [3, 5, 10, 20] {
        // sphere(d, ..) samples S^d in R^(d+1)
        let x = generate(&SyntheticSpec::sphere(n - 1, 2500, n as u64))?;
        let r = est.estimate(&x)?;
        println!(
            "{:>4} {:>6} {:>4} {:>9.2} {:>9.3}",
            n,
            x.n_points(),
            r.k(),
            r.estimate.alpha_used,
            r.n_hat()
        );
    }
    Ok(())
}
