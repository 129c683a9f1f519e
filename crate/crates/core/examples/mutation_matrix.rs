//! Count-matrix normalization followed by an estimate, on a toy
//! genes-by-tumors matrix with a handful of rare genes.

use fisher_dim::io::normalize_mutation_matrix;
use fisher_dim::{DataMatrix, Estimator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fisher_dim::Result<()> {
    let (genes, tumors) = (500, 40);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut v = vec![0.0; genes * tumors];
    for g in 0..genes {
        // the first few genes are almost never hit
        let rate = if g < 8 { 0.01 } else { rng.random_range(0.15..0.5) };
        for t in 0..tumors {
            if rng.random_bool(rate) {
                v[g * tumors + t] = rng.random_range(1..4) as f64;
            }
        }
    }
    let x = DataMatrix::new(genes, tumors, v)?;
    let norm = normalize_mutation_matrix(&x, 5)?;
    let s = norm.summary(genes, tumors, 5);
    println!("genes kept {}/{}, dropped {:?}", s.genes_kept, s.genes_in, s.dropped_genes);
    println!("tumors dropped {:?}", s.dropped_tumors);

    let r = Estimator::default().estimate(&norm.matrix)?;
    println!("k = {}, n_hat = {:.2}", r.k(), r.n_hat());
    Ok(())
}
