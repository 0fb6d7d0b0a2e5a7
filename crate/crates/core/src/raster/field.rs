use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// How a field is continued outside its window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub enum Extension {
    /// Zero outside the window (the convention for sets living in the window).
    #[default]
    Zero,
    /// A fixed value everywhere outside the window.
    Uniform(f64),
}

impl Extension {
    #[inline]
    pub fn outside(&self) -> f64 {
        match *self {
            Extension::Zero => 0.0,
            Extension::Uniform(v) => v,
        }
    }
}

/// Real-valued grid function, constant on each cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
    extension: Extension,
}

impl ScalarField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::Argument(format!(
                "expected {} values, got {}",
                grid.cell_count(),
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(format!("non-finite value at cell {pos}")));
        }
        Ok(Self {
            grid,
            values,
            extension: Extension::Zero,
        })
    }

    pub(crate) fn from_raw(grid: GridSpec, values: Vec<f64>, extension: Extension) -> Self {
        debug_assert_eq!(values.len(), grid.cell_count());
        Self {
            grid,
            values,
            extension,
        }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self::from_raw(grid, vec![value; grid.cell_count()], Extension::Zero)
    }

    /// Builds a field from a function of the cell indices `(i, j)`.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.cell_count());
        for j in 0..n {
            for i in 0..n {
                values.push(f(i, j));
            }
        }
        Self::from_raw(grid, values, Extension::Zero)
    }

    pub fn with_extension(mut self, extension: Extension) -> Self {
        self.extension = extension;
        self
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// Value at a point of the plane, honouring the extension outside the window.
    #[inline]
    pub fn value_at(&self, x: f64, y: f64) -> f64 {
        match self.grid.index_of(x, y) {
            Some(k) => self.values[k],
            None => self.extension.outside(),
        }
    }

    /// `h^2 * sum of values`.
    pub fn integral(&self) -> f64 {
        self.grid.cell_area() * self.values.iter().sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(
            self.grid,
            self.values.iter().map(|&v| f(v)).collect(),
            self.extension,
        )
    }

    fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.ensure_compatible(&other.grid)?;
        let ext = match (self.extension, other.extension) {
            (Extension::Zero, Extension::Zero) => Extension::Zero,
            (a, b) => Extension::Uniform(f(a.outside(), b.outside())),
        };
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_raw(self.grid, values, ext))
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        let ext = match self.extension {
            Extension::Zero => Extension::Zero,
            Extension::Uniform(v) => Extension::Uniform(c * v),
        };
        Self::from_raw(self.grid, self.values.iter().map(|v| c * v).collect(), ext)
    }

    /// `h^2 * sum(a * b)`.
    pub fn inner(&self, other: &ScalarField) -> Result<f64> {
        self.grid.ensure_compatible(&other.grid)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(self.grid.cell_area() * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        let g = GridSpec::unit(2).unwrap();
        assert!(ScalarField::new(g, vec![0.0, 1.0, f64::NAN, 2.0]).is_err());
        assert!(ScalarField::new(g, vec![0.0; 3]).is_err());
    }

    #[test]
    fn extension_outside_window() {
        let g = GridSpec::unit(2).unwrap();
        let f = ScalarField::constant(g, 2.0);
        assert_eq!(f.value_at(1.5, 0.5), 0.0);
        let f = f.with_extension(Extension::Uniform(2.0));
        assert_eq!(f.value_at(1.5, 0.5), 2.0);
        assert_eq!(f.value_at(0.5, 0.5), 2.0);
    }

    #[test]
    fn integral_counts_cell_area() {
        let g = GridSpec::new(4, [0.0, 0.0], 2.0).unwrap();
        let f = ScalarField::constant(g, 1.0);
        assert_eq!(f.integral(), 4.0);
    }

    #[test]
    fn mismatched_grids() {
        let a = ScalarField::zeros(GridSpec::unit(2).unwrap());
        let b = ScalarField::zeros(GridSpec::unit(4).unwrap());
        assert!(matches!(a.add(&b), Err(Error::GridMismatch)));
    }
}
