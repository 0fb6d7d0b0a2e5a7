//! Normalized power-arc measure, its dilates, and the curve-averaging operator.

mod average;
mod cutoff;
mod params;
mod scales;

pub use average::{
    arc_hits_set, average_field, curve_average, first_hit, inf_on_grid, inf_over_scales,
    sample_point, sup_on_grid, sup_over_scales, ArcStencil, CellSource, Extremum, Witness,
};
pub use cutoff::{plateau_bump, Cutoff, DEFAULT_NODES, DEFAULT_PLATEAU};
pub use params::{param_from_scale, scale_from_param, validate_params, Admissibility, CurveParams};
pub use scales::{Sampling, ScaleGrid, DEFAULT_MIN_PER_OCTAVE};

use crate::raster::RasterSet;

/// Interchanges the coordinate axes; a `beta`-curve becomes a `1/beta`-curve
/// with coefficient `a^(-1/beta)`.
pub fn axis_swap(set: &RasterSet) -> RasterSet {
    set.axis_swap()
}
