//! Planar sets and scalar fields on dyadic grids.

mod field;
mod generate;
mod grid;
mod io;
mod set;

pub use field::{Extension, ScalarField};
pub use generate::{checkerboard, generate_random, stripes, target_count};
pub use grid::GridSpec;
pub use io::{
    format_bitmap, load_raster, parse_bitmap, raster_from_bytes, save_raster, sidecar_path,
    write_atomic, WindowMeta,
};
pub use set::RasterSet;
