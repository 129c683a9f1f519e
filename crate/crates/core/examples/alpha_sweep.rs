//! Prints the separability profile of one dataset next to the value the
//! closed-form model predicts for the recovered dimension.

use fisher_dim::preprocess::{preprocess, PreprocessConfig};
use fisher_dim::separability::{alpha_sweep, select_estimate, theoretical_p_alpha, AlphaGrid};
use fisher_dim::synthdata::{generate, SyntheticSpec};

fn main() -> fisher_dim::Result<()> {
    let x = generate(&SyntheticSpec::cube(8, 12, 2000, 3).with_noise(0.02))?;
    let cloud = preprocess(&x, &PreprocessConfig::default())?;
    println!("retained {} components of {}", cloud.k, x.n_features());

    let grid = AlphaGrid::from_range(0.4, 0.98, 0.04)?;
    let est = select_estimate(alpha_sweep(&cloud, &grid)?)?;

    println!("{:>6} {:>12} {:>12} {:>8}", "alpha", "mean p", "model p", "n(alpha)");
    for p in &est.profiles {
        let model = theoretical_p_alpha(est.n_hat, p.alpha)?;
        let n = p.dimension.map_or("-".to_string(), |d| format!("{d:.2}"));
        println!("{:>6.2} {:>12.4e} {:>12.4e} {:>8}", p.alpha, p.mean_prob, model, n);
    }
    println!(
        "alpha_max {:.2}, alpha_used {:.2}, n_hat {:.3}",
        est.alpha_max, est.alpha_used, est.n_hat
    );
    Ok(())
}
