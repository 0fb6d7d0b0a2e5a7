use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{GridSpec, RasterSet};

/// A square `[-r, r]^2 + center` inside the domain of a large set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseWindow {
    pub r: f64,
    pub center: [f64; 2],
    /// Fraction of the window covered by the set.
    pub ratio: f64,
    /// Lower-left cell and side of the window in cells.
    pub corner: [usize; 2],
    pub cells: usize,
}

/// Summed-area table with a zero border row and column.
struct AreaTable {
    n: usize,
    sums: Vec<u32>,
}

impl AreaTable {
    fn new(set: &RasterSet) -> Self {
        let n = set.grid().n();
        let w = n + 1;
        let mut sums = vec![0u32; w * w];
        for j in 0..n {
            let mut row = 0u32;
            for i in 0..n {
                row += set.get(i, j) as u32;
                sums[(j + 1) * w + i + 1] = sums[j * w + i + 1] + row;
            }
        }
        Self { n, sums }
    }

    /// Set cells in the `side x side` block whose lower-left cell is `(i, j)`.
    fn count(&self, i: usize, j: usize, side: usize) -> u32 {
        let w = self.n + 1;
        let at = |a: usize, b: usize| self.sums[b * w + a];
        at(i + side, j + side) + at(i, j) - at(i + side, j) - at(i, j + side)
    }
}

fn window_cells(grid: &GridSpec, r: f64) -> Result<usize> {
    let cells = 2.0 * r / grid.cell_size();
    if !(r > 0.0) || cells.fract() != 0.0 || cells < 1.0 {
        return Err(Error::Argument(format!(
            "window radius {r} is not a whole number of half cells"
        )));
    }
    let cells = cells as usize;
    if cells > grid.n() {
        return Err(Error::Argument(format!("window radius {r} exceeds the domain")));
    }
    Ok(cells)
}

/// Largest listed radius with a cell-aligned window of density at least
/// `delta`, together with the densest such window (first in row-major order
/// of its lower-left cell).
pub fn find_dense_window(set: &RasterSet, delta: f64, radii: &[f64]) -> Result<DenseWindow> {
    let grid = *set.grid();
    let table = AreaTable::new(set);
    let mut sorted: Vec<f64> = radii.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut best_seen: f64 = 0.0;
    for r in sorted {
        let side = window_cells(&grid, r)?;
        let mut best = (0u32, 0usize, 0usize);
        for j in 0..=grid.n() - side {
            for i in 0..=grid.n() - side {
                let c = table.count(i, j, side);
                if c > best.0 {
                    best = (c, i, j);
                }
            }
        }
        let ratio = best.0 as f64 / (side * side) as f64;
        best_seen = best_seen.max(ratio);
        if ratio >= delta {
            let h = grid.cell_size();
            let o = grid.origin();
            return Ok(DenseWindow {
                r,
                center: [o[0] + best.1 as f64 * h + r, o[1] + best.2 as f64 * h + r],
                ratio,
                corner: [best.1, best.2],
                cells: side,
            });
        }
    }
    Err(Error::NoDenseWindow {
        target: delta,
        best: best_seen,
    })
}

/// The part of `set` inside `[-r, r]^2 + center`, rescaled onto the unit
/// square by re-indexing cells.
pub fn normalize_window(set: &RasterSet, r: f64, center: [f64; 2]) -> Result<RasterSet> {
    let grid = *set.grid();
    let side = window_cells(&grid, r)?;
    if !side.is_power_of_two() {
        return Err(Error::Argument(format!(
            "window of {side} cells cannot be normalized to a dyadic grid"
        )));
    }
    let h = grid.cell_size();
    let o = grid.origin();
    let corner = |k: usize| {
        let v = (center[k] - r - o[k]) / h;
        (v.fract() == 0.0 && v >= 0.0 && v as usize + side <= grid.n()).then_some(v as usize)
    };
    let (Some(i0), Some(j0)) = (corner(0), corner(1)) else {
        return Err(Error::Argument(format!(
            "window centered at {center:?} with radius {r} is not a cell-aligned subwindow"
        )));
    };
    Ok(RasterSet::from_fn(GridSpec::unit(side)?, |i, j| set.get(i0 + i, j0 + j)))
}
