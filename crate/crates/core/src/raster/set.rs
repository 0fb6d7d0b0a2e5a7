use bitvec::prelude::*;

use super::field::ScalarField;
use super::grid::GridSpec;
use crate::error::Result;

/// A planar set discretized on a dyadic grid, one bit per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterSet {
    grid: GridSpec,
    bits: BitVec,
}

impl RasterSet {
    pub fn empty(grid: GridSpec) -> Self {
        Self {
            grid,
            bits: bitvec![0; grid.cell_count()],
        }
    }

    pub fn full(grid: GridSpec) -> Self {
        Self {
            grid,
            bits: bitvec![1; grid.cell_count()],
        }
    }

    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut set = Self::empty(grid);
        let n = grid.n();
        for j in 0..n {
            for i in 0..n {
                if f(i, j) {
                    set.insert(i, j);
                }
            }
        }
        set
    }

    /// Set of all cells whose centers satisfy `pred`.
    pub fn from_points(grid: GridSpec, pred: impl Fn(f64, f64) -> bool) -> Self {
        Self::from_fn(grid, |i, j| {
            let (x, y) = grid.cell_center(i, j);
            pred(x, y)
        })
    }

    pub(crate) fn from_bits(grid: GridSpec, bits: BitVec) -> Self {
        debug_assert_eq!(bits.len(), grid.cell_count());
        Self { grid, bits }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn bits(&self) -> &BitSlice {
        &self.bits
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[self.grid.index(i, j)]
    }

    #[inline]
    pub fn get_index(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        let k = self.grid.index(i, j);
        self.bits.set(k, true);
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        let k = self.grid.index(i, j);
        self.bits.set(k, false);
    }

    pub(crate) fn set_index(&mut self, k: usize, value: bool) {
        self.bits.set(k, value);
    }

    /// Membership of a point of the plane; points outside the window are not in the set.
    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match self.grid.index_of(x, y) {
            Some(k) => self.bits[k],
            None => false,
        }
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    /// Lebesgue measure: cell area times the number of set cells.
    pub fn measure(&self) -> f64 {
        self.grid.cell_area() * self.count() as f64
    }

    /// Set cells in row-major scan order (bottom row first).
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.iter_ones().map(|k| self.grid.coords(k))
    }

    pub fn indicator(&self) -> ScalarField {
        ScalarField::from_raw(
            self.grid,
            self.bits.iter().map(|b| if *b { 1.0 } else { 0.0 }).collect(),
            Default::default(),
        )
    }

    /// `1_window - 1_A`, zero outside the window.
    pub fn complement_in_window(&self) -> ScalarField {
        ScalarField::from_raw(
            self.grid,
            self.bits.iter().map(|b| if *b { 0.0 } else { 1.0 }).collect(),
            Default::default(),
        )
    }

    pub fn union(&self, other: &RasterSet) -> Result<RasterSet> {
        self.grid.ensure_compatible(&other.grid)?;
        let mut bits = self.bits.clone();
        bits |= other.bits.as_bitslice();
        Ok(Self::from_bits(self.grid, bits))
    }

    pub fn difference(&self, other: &RasterSet) -> Result<RasterSet> {
        self.grid.ensure_compatible(&other.grid)?;
        let mut bits = self.bits.clone();
        for k in other.bits.iter_ones() {
            bits.set(k, false);
        }
        Ok(Self::from_bits(self.grid, bits))
    }

    /// Transposed bitmap: `(x, y)` is in `A` iff `(y, x)` is in the result.
    pub fn axis_swap(&self) -> RasterSet {
        let grid = self.grid.transposed();
        let n = grid.n();
        let mut bits = bitvec![0; grid.cell_count()];
        for k in self.bits.iter_ones() {
            let (i, j) = self.grid.coords(k);
            bits.set(i * n + j, true);
        }
        Self::from_bits(grid, bits)
    }
}
