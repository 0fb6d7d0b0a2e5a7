use std::borrow::Cow;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::certificate::{decimal, gap_of, BeamCertificate, BeamSample};
use super::ladder::ScaleLadder;
use crate::curve::{first_hit, param_from_scale, ArcStencil, Cutoff, Sampling, ScaleGrid};
use crate::error::{Error, Result};
use crate::raster::RasterSet;

/// Scan options for [`prospect`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProspectConfig {
    pub sampling: Sampling,
    /// Scan only this many set cells, drawn with `seed` and kept in scan order.
    pub subsample: Option<usize>,
    pub seed: u64,
}

impl Default for ProspectConfig {
    fn default() -> Self {
        Self {
            sampling: Sampling::default(),
            subsample: None,
            seed: 0,
        }
    }
}

/// A sampled scale of block `j` whose arc misses the set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockMiss {
    pub j: usize,
    #[serde(with = "decimal")]
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMisses {
    #[serde(with = "decimal::pair")]
    pub point: [f64; 2],
    pub misses: Vec<BlockMiss>,
}

/// Every scanned point together with, for each block, a scale whose arc
/// avoids the set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionReport {
    #[serde(with = "decimal")]
    pub beta: f64,
    #[serde(with = "decimal")]
    pub eta: f64,
    #[serde(with = "decimal")]
    pub theta: f64,
    pub blocks: usize,
    pub points_scanned: usize,
    pub points: Vec<PointMisses>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Certified(BeamCertificate),
    Exhausted(ExhaustionReport),
}

impl Outcome {
    pub fn certificate(&self) -> Option<&BeamCertificate> {
        match self {
            Outcome::Certified(c) => Some(c),
            Outcome::Exhausted(_) => None,
        }
    }
}

/// Result of one `(point, block)` pair: `miss` is the first sampled scale
/// whose arc avoids the set, or `None` when every arc meets it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairOutcome {
    pub point: [f64; 2],
    pub j: usize,
    pub miss: Option<f64>,
}

/// The set the search runs on: the input itself, or its transpose when the
/// exponent is below one.
struct Frame<'a> {
    set: Cow<'a, RasterSet>,
    swapped: bool,
}

impl<'a> Frame<'a> {
    fn new(set: &'a RasterSet, cutoff: &Cutoff) -> Self {
        let swapped = cutoff.params().is_swapped();
        Self {
            set: if swapped {
                Cow::Owned(set.axis_swap())
            } else {
                Cow::Borrowed(set)
            },
            swapped,
        }
    }

    fn to_original(&self, p: (f64, f64)) -> [f64; 2] {
        if self.swapped {
            [p.1, p.0]
        } else {
            [p.0, p.1]
        }
    }
}

struct Block {
    j: usize,
    grid: ScaleGrid,
    stencils: Vec<ArcStencil>,
}

fn blocks(
    set: &RasterSet,
    ladder: &ScaleLadder,
    cutoff: &Cutoff,
    sampling: &Sampling,
) -> Result<Vec<Block>> {
    let params = cutoff.params();
    ladder.check_resolution(set.grid(), params)?;
    ladder
        .entries()
        .iter()
        .enumerate()
        .map(|(k, &(b, c))| {
            let grid = sampling.grid_for(c, b, set.grid(), params)?;
            let stencils = grid.iter().map(|t| ArcStencil::new(cutoff, t)).collect();
            Ok(Block { j: k + 1, grid, stencils })
        })
        .collect()
}

fn scan_points(set: &RasterSet, config: &ProspectConfig) -> Vec<(f64, f64)> {
    let grid = *set.grid();
    let cells: Vec<(usize, usize)> = set.cells().collect();
    let chosen: Vec<(usize, usize)> = match config.subsample {
        Some(k) if k < cells.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut idx = rand::seq::index::sample(&mut rng, cells.len(), k).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| cells[i]).collect()
        }
        _ => cells,
    };
    chosen.into_iter().map(|(i, j)| grid.cell_center(i, j)).collect()
}

fn arc_meets(stencil: &ArcStencil, set: &RasterSet, pt: (f64, f64)) -> bool {
    (0..stencil.dx.len()).any(|i| {
        let (x, y) = stencil.point(pt, i);
        set.contains(x, y)
    })
}

fn first_miss(block: &Block, set: &RasterSet, pt: (f64, f64)) -> Option<f64> {
    block
        .stencils
        .iter()
        .find(|s| !arc_meets(s, set, pt))
        .map(|s| s.t)
}

fn check_input(set: &RasterSet) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Argument("the input set is empty".into()));
    }
    Ok(())
}

/// Outcome of every scanned `(point, block)` pair, point-major.
pub fn scan_outcomes(
    set: &RasterSet,
    ladder: &ScaleLadder,
    cutoff: &Cutoff,
    config: &ProspectConfig,
) -> Result<Vec<PairOutcome>> {
    check_input(set)?;
    let frame = Frame::new(set, cutoff);
    let blocks = blocks(&frame.set, ladder, cutoff, &config.sampling)?;
    let mut out = Vec::new();
    for pt in scan_points(&frame.set, config) {
        for block in &blocks {
            out.push(PairOutcome {
                point: frame.to_original(pt),
                j: block.j,
                miss: first_miss(block, &frame.set, pt),
            });
        }
    }
    Ok(out)
}

/// Scans points of `set`, and for each point the blocks in order, for a block
/// whose every sampled arc meets the set.
pub fn prospect(
    set: &RasterSet,
    ladder: &ScaleLadder,
    cutoff: &Cutoff,
    config: &ProspectConfig,
) -> Result<Outcome> {
    check_input(set)?;
    let frame = Frame::new(set, cutoff);
    let blocks = blocks(&frame.set, ladder, cutoff, &config.sampling)?;
    let points = scan_points(&frame.set, config);
    let mut report = Vec::with_capacity(points.len());
    for &pt in &points {
        let mut misses = Vec::with_capacity(blocks.len());
        for block in &blocks {
            match first_miss(block, &frame.set, pt) {
                Some(t) => misses.push(BlockMiss { j: block.j, t }),
                None => return build_certificate(&frame, cutoff, ladder, block, pt).map(Outcome::Certified),
            }
        }
        report.push(PointMisses {
            point: frame.to_original(pt),
            misses,
        });
    }
    let p = cutoff.params();
    Ok(Outcome::Exhausted(ExhaustionReport {
        beta: p.beta(),
        eta: p.eta(),
        theta: p.theta(),
        blocks: blocks.len(),
        points_scanned: points.len(),
        points: report,
    }))
}

fn build_certificate(
    frame: &Frame,
    cutoff: &Cutoff,
    ladder: &ScaleLadder,
    block: &Block,
    pt: (f64, f64),
) -> Result<BeamCertificate> {
    let params = cutoff.params();
    let beta = params.beta();
    let point = frame.to_original(pt);
    let mut samples = Vec::with_capacity(block.grid.len());
    for t in block.grid.iter() {
        let w = first_hit(cutoff, &frame.set, pt, t).ok_or_else(|| {
            Error::Argument(format!("internal: scale {t} lost its witness"))
        })?;
        let hit = frame.to_original(w.hit);
        samples.push(BeamSample {
            t,
            a: param_from_scale(t, beta)?,
            u: hit[0] - point[0],
            hit,
        });
    }
    let (lo, hi) = ladder.a_interval(block.j, beta)?;
    Ok(BeamCertificate {
        beta,
        eta: params.eta(),
        theta: params.theta(),
        point,
        j: block.j,
        t_interval: [block.grid.lower(), block.grid.upper()],
        a_interval: [lo, hi],
        t_grid_ratio: block.grid.ratio(),
        gap: gap_of(&samples),
        samples,
    })
}

/// Why a certificate was rejected; `sample` indexes the certificate's samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub sample: Option<usize>,
    pub t: Option<f64>,
    pub reason: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.sample, self.t) {
            (Some(k), Some(t)) => write!(f, "sample {k} (t = {t:e}): {}", self.reason),
            (None, Some(t)) => write!(f, "scale t = {t:e}: {}", self.reason),
            _ => f.write_str(&self.reason),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    pub samples_checked: usize,
    pub refined_scales: usize,
    pub failure: Option<Failure>,
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Re-checks a certificate against `set` by direct cell lookups and rescans
/// its block on a grid `refinement` times finer.
pub fn verify_certificate(
    set: &RasterSet,
    cert: &BeamCertificate,
    refinement: usize,
    cutoff: &Cutoff,
) -> Verdict {
    let mut verdict = Verdict {
        valid: false,
        samples_checked: 0,
        refined_scales: 0,
        failure: None,
    };
    let fail = |v: &mut Verdict, sample: Option<usize>, t: Option<f64>, reason: String| {
        v.failure = Some(Failure { sample, t, reason });
    };
    let params = match cert.params() {
        Ok(p) => p,
        Err(e) => {
            fail(&mut verdict, None, None, format!("parameters rejected: {e}"));
            return verdict;
        }
    };
    if params != *cutoff.params() {
        fail(&mut verdict, None, None, "parameters differ from the verifying cutoff".into());
        return verdict;
    }
    let beta = params.beta();
    let [x, y] = cert.point;
    if !set.contains(x, y) {
        fail(&mut verdict, None, None, format!("point ({x}, {y}) is not in the set"));
        return verdict;
    }
    let [c, b] = cert.t_interval;
    let grid = match ScaleGrid::from_ratio(c, b, cert.t_grid_ratio) {
        Ok(g) => g,
        Err(e) => {
            fail(&mut verdict, None, None, format!("scale grid rejected: {e}"));
            return verdict;
        }
    };
    let expected = match (param_from_scale(b, beta), param_from_scale(c, beta)) {
        (Ok(p), Ok(q)) => [p.min(q), p.max(q)],
        _ => {
            fail(&mut verdict, None, None, "scale interval rejected".into());
            return verdict;
        }
    };
    if !(rel_close(expected[0], cert.a_interval[0], 1e-12) && rel_close(expected[1], cert.a_interval[1], 1e-12)) {
        fail(
            &mut verdict,
            None,
            None,
            format!("a-interval {:?} does not match {:?}", cert.a_interval, expected),
        );
        return verdict;
    }
    if cert.samples.len() != grid.len() {
        fail(
            &mut verdict,
            None,
            None,
            format!("{} samples for a grid of {} scales", cert.samples.len(), grid.len()),
        );
        return verdict;
    }
    let (eta, theta) = (params.eta(), params.theta());
    for (k, s) in cert.samples.iter().enumerate() {
        let t = grid.scale(k);
        let mut reject = |reason: String| fail(&mut verdict, Some(k), Some(s.t), reason);
        if !rel_close(s.t, t, 1e-12) {
            reject(format!("scale differs from grid value {t:e}"));
            return verdict;
        }
        let a = param_from_scale(t, beta).unwrap_or(f64::NAN);
        if !rel_close(s.a, a, 1e-12) {
            reject(format!("coefficient {} differs from t^(1-beta) = {a}", s.a));
            return verdict;
        }
        let curve = [x + s.u, y + s.a * s.u.powf(beta)];
        if (curve[0] - s.hit[0]).abs() > 1e-9 || (curve[1] - s.hit[1]).abs() > 1e-9 {
            reject(format!("hit {:?} is not on the curve through the point", s.hit));
            return verdict;
        }
        let along = if params.is_swapped() { s.hit[1] - y } else { s.u };
        if !(along >= eta * t && along <= theta * t) {
            reject(format!("witness displacement {along:e} outside [eta t, theta t]"));
            return verdict;
        }
        if !set.contains(s.hit[0], s.hit[1]) {
            reject(format!("hit ({}, {}) is not in the set", s.hit[0], s.hit[1]));
            return verdict;
        }
        verdict.samples_checked += 1;
    }
    let gap = gap_of(&cert.samples);
    if gap != cert.gap {
        fail(&mut verdict, None, None, format!("gap {:?} does not match samples {:?}", cert.gap, gap));
        return verdict;
    }
    if !params.is_swapped() && !(gap[0] >= eta * c && gap[1] <= theta * b) {
        fail(&mut verdict, None, None, format!("gap {gap:?} outside [eta c, theta b]"));
        return verdict;
    }
    let frame = Frame::new(set, cutoff);
    let pt = if frame.swapped { (y, x) } else { (x, y) };
    for t in grid.refined(refinement).iter() {
        if first_hit(cutoff, &frame.set, pt, t).is_none() {
            fail(&mut verdict, None, Some(t), "arc misses the set on the refined grid".into());
            return verdict;
        }
        verdict.refined_scales += 1;
    }
    verdict.valid = true;
    verdict
}
