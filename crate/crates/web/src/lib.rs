//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain numbers and hands back RGBA bytes for an
//! `n x n` canvas (top row first) so the page can blit them with `ImageData`.

use powerbeam::curve::{average_field, CurveParams, Cutoff, Sampling};
use powerbeam::prospector::{j_bound, prospect, Outcome, ProspectConfig, ScaleLadder};
use powerbeam::raster::{generate_random, GridSpec, RasterSet, ScalarField};
use powerbeam::smoothing::{martingale_average, poisson_smooth, DyadicLevel};
use wasm_bindgen::prelude::*;

const SET: [u8; 3] = [60, 60, 70];
const BACKGROUND: [u8; 3] = [245, 243, 236];
const HIT: [u8; 3] = [214, 40, 40];
const ORIGIN: [u8; 3] = [30, 110, 220];

fn fail(e: powerbeam::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn random_set(n: usize, density: f64, seed: u64) -> Result<RasterSet, JsError> {
    let grid = GridSpec::unit(n).map_err(fail)?;
    generate_random(grid, density, seed).map_err(fail)
}

fn paint_set(set: &RasterSet) -> Vec<u8> {
    let n = set.grid().n();
    let mut px = Vec::with_capacity(n * n * 4);
    for row in 0..n {
        for i in 0..n {
            let c = if set.get(i, n - 1 - row) { SET } else { BACKGROUND };
            px.extend_from_slice(&[c[0], c[1], c[2], 255]);
        }
    }
    px
}

fn mark(px: &mut [u8], grid: &GridSpec, x: f64, y: f64, radius: usize, colour: [u8; 3]) {
    let Some((ci, cj)) = grid.cell_of(x, y) else { return };
    let n = grid.n();
    let row = n - 1 - cj;
    for r in row.saturating_sub(radius)..=(row + radius).min(n - 1) {
        for i in ci.saturating_sub(radius)..=(ci + radius).min(n - 1) {
            let k = 4 * (r * n + i);
            px[k..k + 3].copy_from_slice(&colour);
        }
    }
}

/// Diverging palette for signed fields, sequential for nonnegative ones.
fn paint_field(field: &ScalarField) -> Vec<u8> {
    let n = field.grid().n();
    let lo = field.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let span = field.max_abs().max(1e-300);
    let signed = lo < -1e-12;
    let mut px = Vec::with_capacity(n * n * 4);
    for row in 0..n {
        for i in 0..n {
            let v = field.get(i, n - 1 - row) / span;
            let c = if signed {
                let w = (255.0 * (1.0 - v.abs())) as u8;
                if v >= 0.0 { [255, w, w] } else { [w, w, 255] }
            } else {
                let w = (255.0 * (1.0 - v.clamp(0.0, 1.0))) as u8;
                [w, w, 255 - (255 - w) / 3]
            };
            px.extend_from_slice(&[c[0], c[1], c[2], 255]);
        }
    }
    px
}

/// Random set with the first certified beam drawn on top.
#[wasm_bindgen]
pub struct ProspectView {
    pixels: Vec<u8>,
    summary: String,
}

#[wasm_bindgen]
impl ProspectView {
    pub fn pixels(&self) -> Vec<u8> {
        self.pixels.clone()
    }

    pub fn summary(&self) -> String {
        self.summary.clone()
    }
}

#[wasm_bindgen]
pub fn prospect_random(n: usize, density: f64, seed: u64, beta: f64, nodes: usize) -> Result<ProspectView, JsError> {
    let set = random_set(n, density, seed)?;
    let params = CurveParams::new(beta, 0.5, 0.9).map_err(fail)?;
    let cutoff = Cutoff::new(params, nodes, powerbeam::curve::DEFAULT_PLATEAU).map_err(fail)?;
    let blocks = if set.measure() > 0.0 { j_bound(set.measure().min(0.5), 1.0).map_err(fail)? } else { 1 };
    let ladder = ScaleLadder::default_ladder(blocks).map_err(fail)?;
    let ladder = match ladder.truncate_to_resolution(set.grid(), &params) {
        Some(l) => l,
        None => return Err(JsError::new("grid too coarse for the first block; raise n")),
    };
    let config = ProspectConfig {
        sampling: Sampling::coarse(8),
        ..ProspectConfig::default()
    };
    let mut pixels = paint_set(&set);
    let summary = match prospect(&set, &ladder, &cutoff, &config).map_err(fail)? {
        Outcome::Certified(cert) => {
            for s in &cert.samples {
                mark(&mut pixels, set.grid(), s.hit[0], s.hit[1], 0, HIT);
            }
            mark(&mut pixels, set.grid(), cert.point[0], cert.point[1], 1, ORIGIN);
            format!(
                "certified at ({:.4}, {:.4}), block {}, a in [{}, {}], {} hits",
                cert.point[0],
                cert.point[1],
                cert.j,
                cert.a_interval[0],
                cert.a_interval[1],
                cert.samples.len()
            )
        }
        Outcome::Exhausted(r) => format!("no beam across {} blocks ({} points scanned)", r.blocks, r.points_scanned),
    };
    Ok(ProspectView { pixels, summary })
}

/// Curve average of the set's indicator at scale `t`.
#[wasm_bindgen]
pub fn curve_average_image(n: usize, density: f64, seed: u64, beta: f64, t: f64) -> Result<Vec<u8>, JsError> {
    let set = random_set(n, density, seed)?;
    let params = CurveParams::new(beta, 0.5, 0.9).map_err(fail)?;
    let cutoff = Cutoff::new(params, 64, powerbeam::curve::DEFAULT_PLATEAU).map_err(fail)?;
    Ok(paint_field(&average_field(&cutoff, &set, t)))
}

/// `mode` 0 gives the Poisson smoothing at scale `param`; any other mode
/// gives the indicator minus its dyadic average at level `param`.
#[wasm_bindgen]
pub fn smoothing_image(n: usize, density: f64, seed: u64, mode: u32, param: f64) -> Result<Vec<u8>, JsError> {
    let set = random_set(n, density, seed)?;
    let field = set.indicator();
    let out = if mode == 0 {
        poisson_smooth(&field, param).map_err(fail)?
    } else {
        let avg = martingale_average(&field, DyadicLevel(param as i32)).map_err(fail)?;
        field.sub(&avg).map_err(fail)?
    };
    Ok(paint_field(&out))
}
