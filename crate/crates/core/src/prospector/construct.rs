use crate::curve::{ArcStencil, Cutoff, Sampling};
use crate::error::Result;
use crate::raster::RasterSet;

/// Cells holding a sampled arc point from some cell center of `from` at some
/// sampled scale of `[c, b]`, on the grid of `from`.
pub fn reachable_cells(
    from: &RasterSet,
    c: f64,
    b: f64,
    cutoff: &Cutoff,
    sampling: &Sampling,
) -> Result<RasterSet> {
    if cutoff.params().is_swapped() {
        let swapped = reachable_cells(&from.axis_swap(), c, b, cutoff, sampling)?;
        return Ok(swapped.axis_swap());
    }
    let grid = *from.grid();
    let scales = sampling.grid_for(c, b, &grid, cutoff.params())?;
    let mut out = RasterSet::empty(grid);
    for t in scales.iter() {
        let st = ArcStencil::new(cutoff, t);
        for (ci, cj) in from.cells() {
            let pt = grid.cell_center(ci, cj);
            for i in 0..cutoff.len() {
                let (x, y) = st.point(pt, i);
                if let Some((hi, hj)) = grid.cell_of(x, y) {
                    out.insert(hi, hj);
                }
            }
        }
    }
    Ok(out)
}
