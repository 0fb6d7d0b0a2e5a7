//! Rasterized planar sets, averages along dilated power arcs `v = a u^beta`,
//! Poisson and dyadic smoothing, and a certified search for points of a set
//! through which a whole interval of such curves meets the set again.

pub mod curve;
pub mod error;
pub mod harness;
pub mod prospector;
pub mod raster;
pub mod smoothing;

pub use error::{Error, Result};
