use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square window `[x0, x0 + side) x [y0, y0 + side)` split into `n x n` cells.
///
/// `n` is always a power of two so that every coarser dyadic level lines up
/// with cell boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    origin: [f64; 2],
    side: f64,
}

impl GridSpec {
    pub fn new(n: usize, origin: [f64; 2], side: f64) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("resolution {n} is not a power of two")));
        }
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::Grid(format!("window side {side} must be positive")));
        }
        if !(origin[0].is_finite() && origin[1].is_finite()) {
            return Err(Error::Grid("window origin must be finite".into()));
        }
        Ok(Self { n, origin, side })
    }

    /// `n x n` cells on the unit square at the origin.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(n, [0.0, 0.0], 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn cell_size(&self) -> f64 {
        self.side / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        let h = self.cell_size();
        h * h
    }

    pub fn cell_count(&self) -> usize {
        self.n * self.n
    }

    /// Row-major index; row `j` is the `j`-th row from the bottom.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.n, index / self.n)
    }

    /// Cell containing `(x, y)` under the half-open convention. Points on the
    /// far edges clamp to the last cell; anything else outside is `None`.
    #[inline]
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        Some((self.axis_cell(x, self.origin[0])?, self.axis_cell(y, self.origin[1])?))
    }

    #[inline]
    pub fn index_of(&self, x: f64, y: f64) -> Option<usize> {
        self.cell_of(x, y).map(|(i, j)| self.index(i, j))
    }

    #[inline]
    fn axis_cell(&self, v: f64, start: f64) -> Option<usize> {
        let rel = v - start;
        if !(rel >= 0.0 && rel <= self.side) {
            return None;
        }
        let k = (rel / self.cell_size()).floor() as usize;
        Some(k.min(self.n - 1))
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        let h = self.cell_size();
        (
            self.origin[0] + (i as f64 + 0.5) * h,
            self.origin[1] + (j as f64 + 0.5) * h,
        )
    }

    /// The same window with the coordinate axes interchanged.
    pub fn transposed(&self) -> Self {
        Self {
            n: self.n,
            origin: [self.origin[1], self.origin[0]],
            side: self.side,
        }
    }

    /// Smallest power-of-two resolution whose cells are no larger than `scale`.
    pub fn min_resolution_for(&self, scale: f64) -> usize {
        let mut n = 1usize;
        while self.side / (n as f64) > scale && n < (1 << 30) {
            n <<= 1;
        }
        n
    }

    pub fn ensure_compatible(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}
