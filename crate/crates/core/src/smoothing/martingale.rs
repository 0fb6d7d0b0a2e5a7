use crate::error::{Error, Result};
use crate::raster::{GridSpec, ScalarField};

/// Dyadic level `k`: squares of side `2^-k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicLevel(pub i32);

impl DyadicLevel {
    pub fn side(&self) -> f64 {
        2f64.powi(-self.0)
    }

    /// Side of a level-`k` square in cells, if the level is admissible on `grid`.
    pub fn block_cells(&self, grid: &GridSpec) -> Result<usize> {
        let side = self.side();
        let h = grid.cell_size();
        if side < h {
            return Err(Error::Unresolvable {
                scale: side,
                cell: h,
                min_n: grid.min_resolution_for(side),
            });
        }
        let ratio = side / h;
        let block = ratio.round();
        let aligned = |v: f64| (v / side).fract() == 0.0;
        if block != ratio
            || !(block as usize).is_power_of_two()
            || block as usize > grid.n()
            || !aligned(grid.origin()[0])
            || !aligned(grid.origin()[1])
        {
            return Err(Error::Misaligned { level: self.0 });
        }
        Ok(block as usize)
    }
}

/// Finest and coarsest admissible levels of a grid.
pub fn level_range(grid: &GridSpec) -> Option<(DyadicLevel, DyadicLevel)> {
    let finest = (-grid.cell_size().log2()).round() as i32;
    let coarsest = (-grid.side().log2()).round() as i32;
    let ok = |k| DyadicLevel(k).block_cells(grid).is_ok();
    (ok(finest) && ok(coarsest)).then_some((DyadicLevel(coarsest), DyadicLevel(finest)))
}

/// Means over aligned `block x block` squares, computed by repeated 2x2
/// averaging so that averaging an already block-constant field is exact.
fn block_means(values: &[f64], n: usize, block: usize) -> (Vec<f64>, usize) {
    let mut cur = values.to_vec();
    let mut m = n;
    let mut b = 1;
    while b < block {
        let half = m / 2;
        let mut next = Vec::with_capacity(half * half);
        for jj in 0..half {
            for ii in 0..half {
                let a = cur[(2 * jj) * m + 2 * ii];
                let bb = cur[(2 * jj) * m + 2 * ii + 1];
                let c = cur[(2 * jj + 1) * m + 2 * ii];
                let d = cur[(2 * jj + 1) * m + 2 * ii + 1];
                next.push(((a + bb) + (c + d)) * 0.25);
            }
        }
        cur = next;
        m = half;
        b *= 2;
    }
    (cur, m)
}

/// `E_k h`: the cell-exact mean of `h` on each dyadic square of side `2^-k`.
pub fn martingale_average(field: &ScalarField, level: DyadicLevel) -> Result<ScalarField> {
    let grid = *field.grid();
    let block = level.block_cells(&grid)?;
    let n = grid.n();
    let (means, m) = block_means(field.values(), n, block);
    let values = (0..n * n)
        .map(|k| {
            let (i, j) = (k % n, k / n);
            means[(j / block) * m + i / block]
        })
        .collect();
    Ok(ScalarField::from_raw(grid, values, field.extension()))
}

/// `Delta_i h = E_{i+1} h - E_i h`.
pub fn martingale_difference(field: &ScalarField, level: DyadicLevel) -> Result<ScalarField> {
    let fine = martingale_average(field, DyadicLevel(level.0 + 1))?;
    let coarse = martingale_average(field, level)?;
    fine.sub(&coarse)
}
