use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::grid::GridSpec;
use super::set::RasterSet;
use crate::error::{Error, Result};

/// Number of cells a random set of density `delta` must contain.
pub fn target_count(grid: &GridSpec, delta: f64) -> usize {
    let total = grid.cell_count();
    let raw = delta * total as f64;
    // guard against 0.1 * 2^k style products landing a hair above an integer
    let count = (raw - 1e-9 * raw.max(1.0)).ceil().max(0.0) as usize;
    count.min(total)
}

/// Uniformly random set with exactly `ceil(delta * N^2)` cells, sampled
/// without replacement. Deterministic in `seed`.
pub fn generate_random(grid: GridSpec, delta: f64, seed: u64) -> Result<RasterSet> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Argument(format!("density {delta} must lie in (0, 1]")));
    }
    let total = grid.cell_count();
    let k = target_count(&grid, delta);
    if k == total {
        return Ok(RasterSet::full(grid));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = RasterSet::empty(grid);
    for cell in index::sample(&mut rng, total, k).iter() {
        set.set_index(cell, true);
    }
    Ok(set)
}

/// Horizontal stripes: rows whose index modulo `period` is below `width` are set.
pub fn stripes(grid: GridSpec, period: usize, width: usize) -> Result<RasterSet> {
    if period == 0 || width > period {
        return Err(Error::Argument(format!(
            "stripe width {width} must not exceed period {period} > 0"
        )));
    }
    Ok(RasterSet::from_fn(grid, |_, j| j % period < width))
}

/// Solid square blocks of `block` cells on a checkerboard pattern.
pub fn checkerboard(grid: GridSpec, block: usize) -> Result<RasterSet> {
    if block == 0 {
        return Err(Error::Argument("block size must be positive".into()));
    }
    Ok(RasterSet::from_fn(grid, |i, j| (i / block + j / block) % 2 == 0))
}
