use serde::{Deserialize, Serialize};

use crate::curve::{ArcStencil, Cutoff, ScaleGrid};
use crate::error::{Error, Result};
use crate::raster::ScalarField;
use crate::smoothing::{lp_norm, martingale_average, martingale_difference, DyadicLevel};

/// `||sup_{t in [2^-n, 2^-n+1)} |A_t h| ||_p / ||h||_p` for `h` with `E_i h = 0`,
/// the supremum taken over `per_octave` geometric samples.
pub fn empirical_decay(
    h: &ScalarField,
    i: i32,
    n: i32,
    p: f64,
    cutoff: &Cutoff,
    per_octave: usize,
) -> Result<f64> {
    if n > i {
        return Err(Error::Argument(format!("need n <= i, got n = {n}, i = {i}")));
    }
    let norm = lp_norm(h, p)?;
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let residual = martingale_average(h, DyadicLevel(i))?.max_abs();
    if residual > 1e-9 * h.max_abs().max(1.0) {
        return Err(Error::Argument(format!(
            "E_{i} h does not vanish (max {residual:e})"
        )));
    }
    let lo = 2f64.powi(-n);
    let scales = ScaleGrid::per_octave(lo, 2.0 * lo, per_octave)?;
    // half-open octave: the right endpoint belongs to the next one
    let stencils: Vec<ArcStencil> = scales
        .iter()
        .take(scales.steps())
        .map(|t| ArcStencil::new(cutoff, t))
        .collect();
    let grid = *h.grid();
    let w = cutoff.weights();
    let sup = ScalarField::from_fn(grid, |ci, cj| {
        let pt = grid.cell_center(ci, cj);
        stencils
            .iter()
            .map(|st| st.average(w, h, pt).abs())
            .fold(0.0, f64::max)
    });
    Ok(lp_norm(&sup, p)? / norm)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub i_minus_n: i32,
    pub ratio: f64,
}

/// Ratios for `h = Delta_i g`, `i = n ..= n + spread`.
pub fn decay_table(
    g: &ScalarField,
    n: i32,
    spread: i32,
    p: f64,
    cutoff: &Cutoff,
    per_octave: usize,
) -> Result<Vec<DecayRow>> {
    (0..=spread)
        .map(|d| {
            let h = martingale_difference(g, DyadicLevel(n + d))?;
            Ok(DecayRow {
                i_minus_n: d,
                ratio: empirical_decay(&h, n + d, n, p, cutoff, per_octave)?,
            })
        })
        .collect()
}

/// `-slope` of the least-squares line through `(i - n, log2 ratio)`.
pub fn fit_decay_exponent(rows: &[DecayRow]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.ratio > 0.0)
        .map(|r| (r.i_minus_n as f64, r.ratio.log2()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Argument("need two positive ratios to fit an exponent".into()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Argument("ratios share a single offset".into()));
    }
    Ok(-sxy / sxx)
}
