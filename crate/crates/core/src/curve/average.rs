use serde::{Deserialize, Serialize};

use super::cutoff::Cutoff;
use super::scales::{Sampling, ScaleGrid};
use crate::error::Result;
use crate::raster::{GridSpec, RasterSet, ScalarField};

/// Anything that can be read cell by cell, with a value outside the window.
pub trait CellSource {
    fn grid(&self) -> &GridSpec;
    fn cell_value(&self, k: usize) -> f64;
    fn outside_value(&self) -> f64;

    #[inline]
    fn value_at(&self, x: f64, y: f64) -> f64 {
        match self.grid().index_of(x, y) {
            Some(k) => self.cell_value(k),
            None => self.outside_value(),
        }
    }
}

impl CellSource for RasterSet {
    fn grid(&self) -> &GridSpec {
        RasterSet::grid(self)
    }

    #[inline]
    fn cell_value(&self, k: usize) -> f64 {
        if self.get_index(k) {
            1.0
        } else {
            0.0
        }
    }

    fn outside_value(&self) -> f64 {
        0.0
    }
}

impl CellSource for ScalarField {
    fn grid(&self) -> &GridSpec {
        ScalarField::grid(self)
    }

    #[inline]
    fn cell_value(&self, k: usize) -> f64 {
        self.values()[k]
    }

    fn outside_value(&self) -> f64 {
        self.extension().outside()
    }
}

/// Offsets `(t s_i, t s_i^beta)` of the dilated arc at one scale.
#[derive(Clone, Debug)]
pub struct ArcStencil {
    pub t: f64,
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
}

impl ArcStencil {
    pub fn new(cutoff: &Cutoff, t: f64) -> Self {
        Self {
            t,
            dx: cutoff.nodes().iter().map(|s| t * s).collect(),
            dy: cutoff.node_pows().iter().map(|p| t * p).collect(),
        }
    }

    #[inline]
    pub fn point(&self, pt: (f64, f64), i: usize) -> (f64, f64) {
        (pt.0 + self.dx[i], pt.1 + self.dy[i])
    }

    /// `sum_i w_i src(pt + offset_i)`.
    #[inline]
    pub fn average<S: CellSource + ?Sized>(&self, weights: &[f64], src: &S, pt: (f64, f64)) -> f64 {
        let mut acc = 0.0;
        for i in 0..weights.len() {
            let (x, y) = self.point(pt, i);
            acc += weights[i] * src.value_at(x, y);
        }
        acc
    }
}

/// Sample point of node `i` at scale `t` from `pt`.
#[inline]
pub fn sample_point(cutoff: &Cutoff, pt: (f64, f64), t: f64, i: usize) -> (f64, f64) {
    (pt.0 + t * cutoff.nodes()[i], pt.1 + t * cutoff.node_pows()[i])
}

/// Quadrature of `(reflected sigma_t * f)(pt)`, the weighted average of `f`
/// over the arc `{pt + (u, u^beta / t^(beta-1)) : eta t <= u <= theta t}`.
pub fn curve_average<S: CellSource + ?Sized>(cutoff: &Cutoff, src: &S, t: f64, pt: (f64, f64)) -> f64 {
    let mut acc = 0.0;
    for (i, w) in cutoff.weights().iter().enumerate() {
        let (x, y) = sample_point(cutoff, pt, t, i);
        acc += w * src.value_at(x, y);
    }
    acc
}

/// `curve_average` at every cell center of the source grid.
pub fn average_field<S: CellSource + ?Sized>(cutoff: &Cutoff, src: &S, t: f64) -> ScalarField {
    let grid = *src.grid();
    let stencil = ArcStencil::new(cutoff, t);
    let w = cutoff.weights();
    ScalarField::from_fn(grid, |i, j| stencil.average(w, src, grid.cell_center(i, j)))
}

/// A quadrature offset whose sample point lies in the set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub node: usize,
    /// Horizontal displacement `t s_i`.
    pub u: f64,
    pub hit: (f64, f64),
}

/// All nodes whose sample point at scale `t` lies in `set`.
pub fn arc_hits_set(cutoff: &Cutoff, set: &RasterSet, pt: (f64, f64), t: f64) -> Vec<Witness> {
    (0..cutoff.len())
        .filter_map(|i| witness(cutoff, set, pt, t, i))
        .collect()
}

/// First (smallest-offset) witness, if any.
pub fn first_hit(cutoff: &Cutoff, set: &RasterSet, pt: (f64, f64), t: f64) -> Option<Witness> {
    (0..cutoff.len()).find_map(|i| witness(cutoff, set, pt, t, i))
}

#[inline]
fn witness(cutoff: &Cutoff, set: &RasterSet, pt: (f64, f64), t: f64, i: usize) -> Option<Witness> {
    let hit = sample_point(cutoff, pt, t, i);
    set.contains(hit.0, hit.1).then(|| Witness {
        node: i,
        u: t * cutoff.nodes()[i],
        hit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub t: f64,
}

fn extremum_over<S: CellSource + ?Sized>(
    cutoff: &Cutoff,
    src: &S,
    scales: &ScaleGrid,
    pt: (f64, f64),
    better: impl Fn(f64, f64) -> bool,
) -> Extremum {
    let mut best = Extremum {
        value: curve_average(cutoff, src, scales.lower(), pt),
        t: scales.lower(),
    };
    for t in scales.iter().skip(1) {
        let v = curve_average(cutoff, src, t, pt);
        // strict comparison: the smallest t wins ties
        if better(v, best.value) {
            best = Extremum { value: v, t };
        }
    }
    best
}

/// Infimum of the curve average over the sampled scales of `[c, b]`.
pub fn inf_over_scales<S: CellSource + ?Sized>(
    cutoff: &Cutoff,
    src: &S,
    c: f64,
    b: f64,
    pt: (f64, f64),
    sampling: &Sampling,
) -> Result<Extremum> {
    let scales = sampling.grid_for(c, b, src.grid(), cutoff.params())?;
    Ok(inf_on_grid(cutoff, src, &scales, pt))
}

pub fn sup_over_scales<S: CellSource + ?Sized>(
    cutoff: &Cutoff,
    src: &S,
    c: f64,
    b: f64,
    pt: (f64, f64),
    sampling: &Sampling,
) -> Result<Extremum> {
    let scales = sampling.grid_for(c, b, src.grid(), cutoff.params())?;
    Ok(sup_on_grid(cutoff, src, &scales, pt))
}

pub fn inf_on_grid<S: CellSource + ?Sized>(cutoff: &Cutoff, src: &S, scales: &ScaleGrid, pt: (f64, f64)) -> Extremum {
    extremum_over(cutoff, src, scales, pt, |v, best| v < best)
}

pub fn sup_on_grid<S: CellSource + ?Sized>(cutoff: &Cutoff, src: &S, scales: &ScaleGrid, pt: (f64, f64)) -> Extremum {
    extremum_over(cutoff, src, scales, pt, |v, best| v > best)
}
