//! The principal Lambert W branch and the closed-form inversion built on it.

use fisher_dim::separability::{dimension_from_p, theoretical_p_alpha};
use fisher_dim::specfun::lambert_w0;

fn main() -> fisher_dim::Result<()> {
    println!("{:>12} {:>22} {:>5} {:>10}", "x", "W0(x)", "iter", "rel resid");
    for x in [-1.0 / std::f64::consts::E, -0.2, 0.0, 1.0, std::f64::consts::E, 1e3, 1e100] {
        let r = lambert_w0(x)?;
        println!("{:>12.5e} {:>22.16} {:>5} {:>10.2e}", x, r.w, r.iterations, r.residual / x.abs().max(1.0));
    }

    println!();
    println!("{:>6} {:>6} {:>12} {:>10}", "n", "alpha", "p", "recovered");
    for n in [2.0, 10.0, 50.0, 100.0] {
        for alpha in [0.6, 0.8, 0.95] {
            let p = theoretical_p_alpha(n, alpha)?;
            println!("{:>6} {:>6} {:>12.4e} {:>10.6}", n, alpha, p, dimension_from_p(p, alpha)?);
        }
    }
    Ok(())
}
