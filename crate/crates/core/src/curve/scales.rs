use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::GridSpec;

use super::params::CurveParams;

pub const DEFAULT_MIN_PER_OCTAVE: usize = 16;

/// How scale intervals `[c, b]` are discretized.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    /// Lower bound on samples per dyadic octave.
    pub min_per_octave: usize,
    /// When set, skip the displacement bound and use exactly
    /// `min_per_octave` samples per octave.
    pub coarse: bool,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            min_per_octave: DEFAULT_MIN_PER_OCTAVE,
            coarse: false,
        }
    }
}

impl Sampling {
    pub fn coarse(per_octave: usize) -> Self {
        Self {
            min_per_octave: per_octave,
            coarse: true,
        }
    }

    pub fn grid_for(&self, c: f64, b: f64, grid: &GridSpec, params: &CurveParams) -> Result<ScaleGrid> {
        if self.coarse {
            ScaleGrid::per_octave(c, b, self.min_per_octave)
        } else {
            ScaleGrid::displacement_bounded(c, b, grid.cell_size(), params.reach(), self.min_per_octave)
        }
    }
}

/// Geometric samples `t_k = c (b/c)^(k/steps)`, `k = 0..=steps`, of `[c, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    c: f64,
    b: f64,
    steps: usize,
}

fn check_interval(c: f64, b: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite() && b.is_finite()) {
        return Err(Error::Argument(format!("scale {c} must be positive")));
    }
    if c > b {
        return Err(Error::Argument(format!("empty scale interval [{c}, {b}]")));
    }
    Ok(())
}

impl ScaleGrid {
    pub fn with_steps(c: f64, b: f64, steps: usize) -> Result<Self> {
        check_interval(c, b)?;
        let steps = if c == b { 0 } else { steps.max(1) };
        Ok(Self { c, b, steps })
    }

    /// Consecutive arcs of radius `reach * t` move by at most `cell / 2`, with
    /// at least `min_per_octave` samples per octave.
    pub fn displacement_bounded(
        c: f64,
        b: f64,
        cell: f64,
        reach: f64,
        min_per_octave: usize,
    ) -> Result<Self> {
        check_interval(c, b)?;
        if c == b {
            return Self::with_steps(c, b, 0);
        }
        let span = (b / c).ln();
        let max_log_ratio = (cell / (2.0 * b * reach)).ln_1p();
        let by_displacement = (span / max_log_ratio).ceil();
        let by_octave = (min_per_octave as f64 * (b / c).log2()).ceil();
        Self::with_steps(c, b, by_displacement.max(by_octave).max(1.0) as usize)
    }

    pub fn per_octave(c: f64, b: f64, per_octave: usize) -> Result<Self> {
        check_interval(c, b)?;
        let steps = (per_octave.max(1) as f64 * (b / c).log2()).ceil().max(1.0) as usize;
        Self::with_steps(c, b, steps)
    }

    /// Grid with the given consecutive ratio (as recorded in certificates).
    pub fn from_ratio(c: f64, b: f64, ratio: f64) -> Result<Self> {
        check_interval(c, b)?;
        if c == b {
            return Self::with_steps(c, b, 0);
        }
        if !(ratio > 1.0) {
            return Err(Error::Argument(format!("grid ratio {ratio} must exceed 1")));
        }
        let steps = ((b / c).ln() / ratio.ln()).round().max(1.0) as usize;
        Self::with_steps(c, b, steps)
    }

    /// Every original sample is kept; each gap is split `factor` times.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            steps: self.steps * factor.max(1),
            ..*self
        }
    }

    pub fn lower(&self) -> f64 {
        self.c
    }

    pub fn upper(&self) -> f64 {
        self.b
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ratio(&self) -> f64 {
        if self.steps == 0 {
            1.0
        } else {
            (self.b / self.c).powf(1.0 / self.steps as f64)
        }
    }

    pub fn scale(&self, k: usize) -> f64 {
        if k >= self.steps {
            self.b
        } else if k == 0 {
            self.c
        } else {
            self.c * (self.b / self.c).powf(k as f64 / self.steps as f64)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| self.scale(k))
    }
}
