//! Blocked pairwise kernels.
//!
//! Both kernels walk the `N x N` pair space in stripes of `block_size` rows
//! and never hold more than a `block_size x TILE` slab of pair values. Each
//! pair value is placed into a bucket of a sorted threshold list, and the
//! per-threshold counts are recovered from bucket suffix sums, so a whole
//! grid of thresholds costs one pass over the pairs.
//!
//! Stripes are independent and write disjoint output, which keeps the
//! integer results identical for any thread count.

use rayon::prelude::*;

use crate::error::{FisherError, Result};
use crate::matrix::{dot, squared_distance, DataMatrix};

/// Columns processed per tile inside a stripe.
const TILE: usize = 128;

/// Runs `f` on a dedicated pool with `threads` workers, or on the global
/// pool when `threads` is `None`.
pub(crate) fn with_threads<R, F>(threads: Option<usize>, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match threads {
        None => Ok(f()),
        Some(0) => Err(FisherError::InvalidInput("thread count must be positive".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| FisherError::InvalidInput(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// For every point `j` and every grid value `alpha_m`, counts the points
/// `i != j` with `(u_j, u_i) / (u_j, u_j) > alpha_m`.
///
/// `grid` must be sorted increasing. The result is row-major `N x M`.
pub(crate) fn exceedance_counts(points: &DataMatrix, grid: &[f64], block_size: usize) -> Vec<u32> {
    let n = points.n_points();
    let m = grid.len();
    let block_size = block_size.max(1);
    let lowest = grid[0];
    let diag: Vec<f64> = points.rows().map(|r| dot(r, r)).collect();
    let mut out = vec![0u32; n * m];

    out.par_chunks_mut(block_size * m)
        .enumerate()
        .for_each(|(b, chunk)| {
            let start = b * block_size;
            let rows = chunk.len() / m;
            let mut hist = vec![0u32; rows * (m + 1)];
            let mut tile = vec![0.0f64; rows * TILE];
            for col0 in (0..n).step_by(TILE) {
                let cols = TILE.min(n - col0);
                for r in 0..rows {
                    let uj = points.row(start + r);
                    let slab = &mut tile[r * TILE..r * TILE + cols];
                    for (c, v) in slab.iter_mut().enumerate() {
                        *v = dot(uj, points.row(col0 + c));
                    }
                }
                for r in 0..rows {
                    let j = start + r;
                    let self_ip = diag[j];
                    let h = &mut hist[r * (m + 1)..(r + 1) * (m + 1)];
                    for (c, &g) in tile[r * TILE..r * TILE + cols].iter().enumerate() {
                        let ratio = g / self_ip;
                        if !(ratio > lowest) || col0 + c == j {
                            continue;
                        }
                        h[grid.partition_point(|&a| a < ratio)] += 1;
                    }
                }
            }
            for r in 0..rows {
                let h = &hist[r * (m + 1)..(r + 1) * (m + 1)];
                let dst = &mut chunk[r * m..(r + 1) * m];
                let mut acc = 0u32;
                for idx in (0..m).rev() {
                    acc += h[idx + 1];
                    dst[idx] = acc;
                }
            }
        });
    out
}

/// For every radius `r_m` (sorted increasing) counts unordered pairs
/// `i < j` with `||x_i - x_j|| < r_m`.
pub(crate) fn pair_distance_counts(x: &DataMatrix, radii: &[f64], block_size: usize) -> Vec<u64> {
    let n = x.n_points();
    let m = radii.len();
    let block_size = block_size.max(1);
    let largest = radii[m - 1];
    let n_blocks = n.div_ceil(block_size);

    let hists: Vec<Vec<u64>> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut hist = vec![0u64; m + 1];
            let lo = b * block_size;
            let hi = (lo + block_size).min(n);
            for i in lo..hi {
                let xi = x.row(i);
                for j in (i + 1)..n {
                    let d = squared_distance(xi, x.row(j)).sqrt();
                    if d < largest {
                        // number of radii <= d, i.e. the first radius that counts this pair
                        hist[radii.partition_point(|&r| r <= d)] += 1;
                    }
                }
            }
            hist
        })
        .collect();

    let mut total = vec![0u64; m + 1];
    for h in &hists {
        for (t, v) in total.iter_mut().zip(h) {
            *t += v;
        }
    }
    let mut out = vec![0u64; m];
    let mut acc = 0u64;
    for idx in 0..m {
        acc += total[idx];
        out[idx] = acc;
    }
    out
}
