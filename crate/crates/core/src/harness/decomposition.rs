use serde::{Deserialize, Serialize};

use super::constants::{compute_j0, HarnessConstants};
use crate::curve::{ArcStencil, Cutoff, Sampling, ScaleGrid};
use crate::error::{Error, Result};
use crate::prospector::ScaleLadder;
use crate::raster::{RasterSet, ScalarField};
use crate::smoothing::{martingale_average, DyadicLevel, PoissonPlan};

/// `h^2 * sum of field values over the cells of f`, i.e. `integral of 1_f * field`.
pub fn pairing(f: &RasterSet, field: &ScalarField) -> Result<f64> {
    f.grid().ensure_compatible(field.grid())?;
    let v = field.values();
    let grid = f.grid();
    Ok(grid.cell_area() * f.cells().map(|(i, j)| v[grid.index(i, j)]).sum::<f64>())
}

/// Values of the four-term splitting of `sup_t (curve average of g)` over block `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub j: usize,
    pub rho: f64,
    pub tau: f64,
    pub j0: usize,
    /// Level of the martingale average, `-log2(rho c_j)`.
    pub k_j: i32,
    /// `-log2(c_j)`.
    pub d_j: i32,
    pub measure: f64,
    pub lhs: f64,
    pub term1: f64,
    pub term2: f64,
    pub term3: f64,
    pub term4: f64,
    pub tail: f64,
    pub taubelow_bound: f64,
    /// `term1 + ... + term4 + tail - lhs`.
    pub decomposition_slack: f64,
    pub decomposition_holds: bool,
    /// Every point of the set has a sampled scale in block `j` whose arc
    /// avoids the set.
    pub hypothesis_holds: bool,
    pub j_above_j0: bool,
    /// `lhs - taubelow_bound`.
    pub taubelow_slack: f64,
    /// Checked only when the hypothesis holds and `j > j0`.
    pub taubelow_holds: Option<bool>,
}

pub(crate) fn exact_log2(x: f64) -> Option<i32> {
    let e = x.log2().round() as i32;
    (2f64.powi(e) == x).then_some(e)
}

pub(crate) fn resolvable(set: &RasterSet, scale: f64) -> Result<()> {
    let h = set.grid().cell_size();
    if scale < h {
        return Err(Error::Unresolvable {
            scale,
            cell: h,
            min_n: set.grid().min_resolution_for(scale),
        });
    }
    Ok(())
}

fn block_scales(
    set: &RasterSet,
    ladder: &ScaleLadder,
    j: usize,
    cutoff: &Cutoff,
    sampling: &Sampling,
) -> Result<(f64, f64, ScaleGrid)> {
    let (b, c) = ladder.block(j)?;
    let grid = sampling.grid_for(c, b, set.grid(), cutoff.params())?;
    Ok((b, c, grid))
}

/// Evaluates the splitting
/// `A_t g <= |A_t(g - E g)| + |A_t(E g - P_s g)| + |A_t(P_s g - P_T g)| + |A_t P_T g - P_T g| + P_T g`
/// with `A_t` the curve average, `E = E_{k_j}`, `s = rho c_j` and `T = b_j / rho`,
/// each term integrated against the set after a supremum over the block.
pub fn compute_decomposition(
    set: &RasterSet,
    j: usize,
    ladder: &ScaleLadder,
    constants: &HarnessConstants,
    cutoff: &Cutoff,
    sampling: &Sampling,
) -> Result<DecompositionReport> {
    let (b, c, scales) = block_scales(set, ladder, j, cutoff, sampling)?;
    let rho = constants.rho;
    let fine = rho * c;
    resolvable(set, fine)?;
    let k_j = exact_log2(fine)
        .map(|e| -e)
        .ok_or_else(|| Error::Argument(format!("rho c_j = {fine} is not dyadic")))?;
    let d_j = exact_log2(c).map(|e| -e).unwrap_or(i32::MIN);
    let coarse = b / rho;

    let g = set.complement_in_window();
    let eg = martingale_average(&g, DyadicLevel(k_j))?;
    let mut plan = PoissonPlan::new(&g);
    let pc = plan.smooth(fine)?;
    let pb = plan.smooth(coarse)?;
    let fields = [&g, &eg, &pc, &pb];
    let outside = fields.map(|f| f.extension().outside());
    let stencils: Vec<ArcStencil> = scales.iter().map(|t| ArcStencil::new(cutoff, t)).collect();
    let weights = cutoff.weights();
    let grid = *set.grid();

    let mut sums = [0.0f64; 6];
    let mut hypothesis = true;
    for (ci, cj) in set.cells() {
        let pt = grid.cell_center(ci, cj);
        let mut sup = [f64::NEG_INFINITY, 0.0, 0.0, 0.0, 0.0];
        let here = pb.get(ci, cj);
        let mut some_miss = false;
        for st in &stencils {
            let mut acc = [0.0f64; 4];
            let mut meets = false;
            for (i, w) in weights.iter().enumerate() {
                let (x, y) = st.point(pt, i);
                match grid.index_of(x, y) {
                    Some(k) => {
                        meets |= set.get_index(k);
                        for (a, f) in acc.iter_mut().zip(fields) {
                            *a += w * f.values()[k];
                        }
                    }
                    None => {
                        for (a, o) in acc.iter_mut().zip(outside) {
                            *a += w * o;
                        }
                    }
                }
            }
            some_miss |= !meets;
            sup[0] = sup[0].max(acc[0]);
            sup[1] = sup[1].max((acc[0] - acc[1]).abs());
            sup[2] = sup[2].max((acc[1] - acc[2]).abs());
            sup[3] = sup[3].max((acc[2] - acc[3]).abs());
            sup[4] = sup[4].max((acc[3] - here).abs());
        }
        hypothesis &= some_miss;
        for k in 0..5 {
            sums[k] += sup[k];
        }
        sums[5] += here;
    }
    let area = grid.cell_area();
    let [lhs, term1, term2, term3, term4, tail] = sums.map(|s| s * area);
    let measure = set.measure();
    let j0 = compute_j0(constants.tau, cutoff.params())?;
    let taubelow_bound = measure - 4.0 * constants.tau;
    let decomposition_slack = term1 + term2 + term3 + term4 + tail - lhs;
    let j_above_j0 = j > j0;
    Ok(DecompositionReport {
        j,
        rho,
        tau: constants.tau,
        j0,
        k_j,
        d_j,
        measure,
        lhs,
        term1,
        term2,
        term3,
        term4,
        tail,
        taubelow_bound,
        decomposition_slack,
        decomposition_holds: decomposition_slack >= -1e-9,
        hypothesis_holds: hypothesis,
        j_above_j0,
        taubelow_slack: lhs - taubelow_bound,
        taubelow_holds: (hypothesis && j_above_j0).then_some(lhs >= taubelow_bound - 1e-9),
    })
}

/// Deviation `s(rho)` of the curve average of `P_T g` from `P_T g`, `T = b / rho`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmalltRow {
    pub rho: f64,
    pub scale: f64,
    pub deviation: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmalltReport {
    pub j: usize,
    pub rows: Vec<SmalltRow>,
    /// Largest over smallest `deviation / rho` across the rows.
    pub spread: f64,
}

/// `max |A_t P_T g - P_T g|` over sampled `t` in `[c, b]` and cell centers
/// whose arcs stay inside the window.
pub fn smallt_deviation(
    g: &ScalarField,
    c: f64,
    b: f64,
    rho: f64,
    cutoff: &Cutoff,
    sampling: &Sampling,
) -> Result<f64> {
    let grid = *g.grid();
    let pb = PoissonPlan::new(g).smooth(b / rho)?;
    let scales = sampling.grid_for(c, b, &grid, cutoff.params())?;
    let stencils: Vec<ArcStencil> = scales.iter().map(|t| ArcStencil::new(cutoff, t)).collect();
    let w = cutoff.weights();
    let last = cutoff.len() - 1;
    let far = [b * cutoff.nodes()[last], b * cutoff.node_pows()[last]];
    let top = [grid.origin()[0] + grid.side(), grid.origin()[1] + grid.side()];
    let mut worst: f64 = 0.0;
    for cj in 0..grid.n() {
        for ci in 0..grid.n() {
            let pt = grid.cell_center(ci, cj);
            if pt.0 + far[0] >= top[0] || pt.1 + far[1] >= top[1] {
                continue;
            }
            let here = pb.get(ci, cj);
            for st in &stencils {
                worst = worst.max((st.average(w, &pb, pt) - here).abs());
            }
        }
    }
    Ok(worst)
}

/// `s(rho) / rho` for each listed `rho`, on `g = 1 - 1_A` over block `j`.
pub fn check_smallt_scaling(
    set: &RasterSet,
    j: usize,
    ladder: &ScaleLadder,
    rhos: &[f64],
    cutoff: &Cutoff,
    sampling: &Sampling,
) -> Result<SmalltReport> {
    smallt_for_field(&set.complement_in_window(), j, ladder, rhos, cutoff, sampling)
}

pub fn smallt_for_field(
    g: &ScalarField,
    j: usize,
    ladder: &ScaleLadder,
    rhos: &[f64],
    cutoff: &Cutoff,
    sampling: &Sampling,
) -> Result<SmalltReport> {
    let (b, c) = ladder.block(j)?;
    let h = g.grid().cell_size();
    let rows = rhos
        .iter()
        .map(|&rho| {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(Error::Argument(format!("rho = {rho} must lie in (0, 1)")));
            }
            if c < h {
                return Err(Error::Unresolvable {
                    scale: c,
                    cell: h,
                    min_n: g.grid().min_resolution_for(c),
                });
            }
            let deviation = smallt_deviation(g, c, b, rho, cutoff, sampling)?;
            Ok(SmalltRow {
                rho,
                scale: b / rho,
                deviation,
                ratio: deviation / rho,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let spread = if hi == 0.0 { 1.0 } else { hi / lo };
    Ok(SmalltReport { j, rows, spread })
}
