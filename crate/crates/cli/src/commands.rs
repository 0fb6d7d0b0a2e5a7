use std::path::{Path, PathBuf};
use std::time::Instant;

use powerbeam::curve::{average_field, Sampling};
use powerbeam::harness::{
    check_smallt_scaling, compute_decomposition, compute_j0, compute_sq_sums, decay_table, est_chain,
    fit_decay_exponent, DecayRow, DecompositionReport, EstReport, SmalltReport, SquareSums,
};
use powerbeam::prospector::{
    j_bound, prospect, reachable_cells, verify_certificate, BeamCertificate, Outcome, ProspectConfig,
    ScaleLadder, Verdict,
};
use powerbeam::raster::{checkerboard, generate_random, load_raster, save_raster, stripes, GridSpec, RasterSet};
use powerbeam::smoothing::{martingale_average, poisson_smooth, DyadicLevel};
use powerbeam::Error;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{digest, write_csv, write_json, RunReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_REJECTED: u8 = 2;
pub const EXIT_EXHAUSTED: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Random,
    Full,
    Empty,
    Stripes,
    Checkerboard,
    /// Full square minus every cell reachable from its lower-left quadrant
    /// by arcs of the first block.
    Counter,
}

pub struct GenOptions {
    pub kind: Kind,
    pub period: usize,
    pub width: usize,
    pub block: usize,
    pub output: Option<PathBuf>,
}

fn ensure_dir(dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Argument(format!("{}: {e}", dir.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "raster".into())
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn gen(cfg: &RunConfig, opts: &GenOptions) -> Result<u8, Error> {
    let grid = GridSpec::unit(cfg.n)?;
    let set = match opts.kind {
        Kind::Random => generate_random(grid, cfg.delta, cfg.seed)?,
        Kind::Full => RasterSet::full(grid),
        Kind::Empty => RasterSet::empty(grid),
        Kind::Stripes => stripes(grid, opts.period, opts.width)?,
        Kind::Checkerboard => checkerboard(grid, opts.block)?,
        Kind::Counter => {
            let half = cfg.n / 2;
            let quadrant = RasterSet::from_fn(grid, |i, j| i < half && j < half);
            let (b, c) = ScaleLadder::default_ladder(1)?.block(1)?;
            let reach = reachable_cells(&quadrant, c, b, &cfg.cutoff()?, &cfg.sampling())?;
            RasterSet::full(grid).difference(&reach)?
        }
    };
    let dir = cfg.output_dir();
    ensure_dir(&dir)?;
    let name = opts.output.clone().unwrap_or_else(|| {
        let kind = serde_json::to_value(opts.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        PathBuf::from(format!("{kind}_n{}.pb", cfg.n))
    });
    let path = dir.join(name);
    save_raster(&set, &path)?;
    println!("{} measure={}", path.display(), set.measure());
    Ok(EXIT_OK)
}

/// Ladder for a run: explicit block counts must be resolvable, the default
/// count from the density bound is trimmed to the grid.
fn ladder_for(cfg: &RunConfig, set: &RasterSet) -> Result<ScaleLadder, Error> {
    let params = cfg.params()?;
    match cfg.blocks {
        Some(b) => {
            let ladder = ScaleLadder::default_ladder(b)?;
            ladder.check_resolution(set.grid(), &params)?;
            Ok(ladder)
        }
        None => {
            let density = set.measure().min(0.5);
            let count = if density > 0.0 { j_bound(density, cfg.c_prime)? } else { 1 };
            let full = ScaleLadder::default_ladder(count)?;
            match full.truncate_to_resolution(set.grid(), &params) {
                Some(l) => Ok(l),
                None => full.check_resolution(set.grid(), &params).map(|_| full),
            }
        }
    }
}

#[derive(Serialize)]
struct ProspectSummary {
    result: &'static str,
    file: PathBuf,
    blocks: usize,
    j: Option<usize>,
    point: Option<[f64; 2]>,
    a_interval: Option<[f64; 2]>,
    points_scanned: Option<usize>,
}

pub fn prospect_cmd(cfg: &RunConfig, input: &Path) -> Result<u8, Error> {
    let start = Instant::now();
    let set = load_raster(input)?;
    let cutoff = cfg.cutoff()?;
    let ladder = ladder_for(cfg, &set)?;
    let load_ms = elapsed_ms(start);
    let config = ProspectConfig {
        sampling: cfg.sampling(),
        subsample: cfg.subsample,
        seed: cfg.seed,
    };
    let search = Instant::now();
    let outcome = prospect(&set, &ladder, &cutoff, &config)?;
    let search_ms = elapsed_ms(search);
    let dir = cfg.output_dir();
    ensure_dir(&dir)?;
    let base = stem(input);
    let (summary, code) = match &outcome {
        Outcome::Certified(cert) => {
            let file = dir.join(format!("{base}.certificate.json"));
            write_json(&file, cert)?;
            println!("certificate: point ({}, {}), block {}, a in [{}, {}] -> {}", cert.point[0], cert.point[1], cert.j, cert.a_interval[0], cert.a_interval[1], file.display());
            (
                ProspectSummary {
                    result: "certificate",
                    file,
                    blocks: ladder.len(),
                    j: Some(cert.j),
                    point: Some(cert.point),
                    a_interval: Some(cert.a_interval),
                    points_scanned: None,
                },
                EXIT_OK,
            )
        }
        Outcome::Exhausted(report) => {
            let file = dir.join(format!("{base}.exhaustion.json"));
            write_json(&file, report)?;
            println!("exhausted: {} points, {} blocks -> {}", report.points_scanned, report.blocks, file.display());
            (
                ProspectSummary {
                    result: "exhaustion",
                    file,
                    blocks: ladder.len(),
                    j: None,
                    point: None,
                    a_interval: None,
                    points_scanned: Some(report.points_scanned),
                },
                EXIT_EXHAUSTED,
            )
        }
    };
    let mut report = RunReport::new("prospect", RunConfig { n: set.grid().n(), ..cfg.clone() }, summary);
    report.inputs.push(digest(input)?);
    report.timings_ms.insert("load", load_ms);
    report.timings_ms.insert("search", search_ms);
    write_json(&dir.join(format!("{base}.prospect.json")), &report)?;
    Ok(code)
}

pub fn verify_cmd(cfg: &RunConfig, certificate: &Path, raster: &Path, refinement: usize) -> Result<u8, Error> {
    let text = std::fs::read_to_string(certificate)
        .map_err(|e| Error::Argument(format!("{}: {e}", certificate.display())))?;
    let cert = BeamCertificate::from_json(&text)?;
    let set = load_raster(raster)?;
    let cutoff = powerbeam::curve::Cutoff::new(cert.params()?, cfg.nodes, cfg.plateau)?;
    let verdict: Verdict = verify_certificate(&set, &cert, refinement, &cutoff);
    if verdict.valid {
        println!(
            "valid: {} samples checked, {} scales rescanned at refinement {refinement}",
            verdict.samples_checked, verdict.refined_scales
        );
        Ok(EXIT_OK)
    } else {
        let why = verdict.failure.map(|f| f.to_string()).unwrap_or_default();
        println!("rejected: {why}");
        Ok(EXIT_REJECTED)
    }
}

#[derive(Serialize)]
struct Skipped {
    j: usize,
    reason: String,
}

#[derive(Serialize)]
struct HardChecks {
    decomposition: bool,
    taubelow: bool,
    pigeonhole: bool,
    cauchy_schwarz: bool,
    linf: bool,
}

#[derive(Serialize)]
struct HarnessOutcome {
    constants: powerbeam::harness::HarnessConstants,
    rho_source: &'static str,
    j0: usize,
    blocks: usize,
    decompositions: Vec<DecompositionReport>,
    skipped: Vec<Skipped>,
    smallt: Vec<SmalltReport>,
    square_sums: Option<SquareSums>,
    est: Vec<EstReport>,
    decay_exponent: Option<f64>,
    decay: Vec<DecayRow>,
    hard_checks: HardChecks,
}

#[derive(Serialize)]
struct DecompositionRow {
    j: usize,
    rho: f64,
    lhs: f64,
    term1: f64,
    term2: f64,
    term3: f64,
    term4: f64,
    tail: f64,
    taubelow_bound: f64,
    decomposition_holds: bool,
    hypothesis_holds: bool,
}

#[derive(Serialize)]
struct SmalltCsvRow {
    j: usize,
    rho: f64,
    scale: f64,
    deviation: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct DecayCsvRow {
    i_minus_n: i32,
    ratio: f64,
    p: f64,
    seed: u64,
}

pub fn harness_cmd(cfg: &RunConfig, input: &Path, rhos: &[f64]) -> Result<u8, Error> {
    let set = load_raster(input)?;
    let cutoff = cfg.cutoff()?;
    let params = cfg.params()?;
    let ladder = ladder_for(cfg, &set)?;
    let sampling = Sampling::coarse(cfg.min_per_octave);
    let h = set.grid().cell_size();
    let mut constants = cfg.constants()?;
    // The density rule gives separations far below any practical grid, so an
    // unset rho is raised to the first dyadic value that resolves block 1.
    let mut rho_source = if cfg.rho.is_some() { "flag" } else { "density rule" };
    let (_, c1) = ladder.block(1)?;
    if cfg.rho.is_none() && constants.rho * c1 < h {
        let mut rho = constants.rho;
        while rho * c1 < h && rho < 0.5 {
            rho *= 2.0;
        }
        constants = constants.with_rho(rho)?;
        rho_source = "resolution floor";
    }
    let j0 = compute_j0(constants.tau, &params)?;
    let mut timings = Vec::new();

    let start = Instant::now();
    let mut decompositions = Vec::new();
    let mut skipped = Vec::new();
    for j in 1..=ladder.len() {
        match compute_decomposition(&set, j, &ladder, &constants, &cutoff, &sampling) {
            Ok(r) => decompositions.push(r),
            Err(e @ Error::Unresolvable { .. }) => skipped.push(Skipped { j, reason: e.to_string() }),
            Err(e) => return Err(e),
        }
    }
    if decompositions.is_empty() {
        let (_, c) = ladder.block(1)?;
        let scale = constants.rho * c;
        return Err(Error::Argument(format!(
            "no block is resolvable at rho = {}: rho c_1 = {scale:e} needs N >= {}; pass --rho",
            constants.rho,
            set.grid().min_resolution_for(scale)
        )));
    }
    timings.push(("decomposition", elapsed_ms(start)));

    let start = Instant::now();
    let resolvable: Vec<usize> = (1..=ladder.len()).filter(|&j| ladder.block(j).map_or(false, |(_, c)| c >= h)).collect();
    let smallt = resolvable
        .iter()
        .map(|&j| check_smallt_scaling(&set, j, &ladder, rhos, &cutoff, &sampling))
        .collect::<Result<Vec<_>, _>>()?;
    timings.push(("smallt", elapsed_ms(start)));

    let start = Instant::now();
    let last = decompositions.iter().map(|d| d.j).max().unwrap_or(1);
    let j0_used = j0.min(last - 1);
    let square_sums = Some(compute_sq_sums(&set, &ladder, j0_used, last, &constants)?);
    let est = ladder
        .entries()
        .iter()
        .map(|&(_, c)| est_chain(&set, c))
        .collect::<Result<Vec<_>, _>>()?;
    timings.push(("sums", elapsed_ms(start)));

    let start = Instant::now();
    let levels = set.grid().n().trailing_zeros() as i32;
    let spread = (levels - 2).min(6);
    let (decay, decay_exponent) = if spread >= 1 {
        let rows = decay_table(&set.complement_in_window(), 1, spread, constants.p, &cutoff, cfg.min_per_octave)?;
        let alpha = fit_decay_exponent(&rows).ok();
        (rows, alpha)
    } else {
        (Vec::new(), None)
    };
    timings.push(("decay", elapsed_ms(start)));

    let hard_checks = HardChecks {
        decomposition: decompositions.iter().all(|d| d.decomposition_holds),
        taubelow: decompositions.iter().all(|d| d.taubelow_holds != Some(false)),
        pigeonhole: square_sums.as_ref().map_or(true, |s| s.pigeonhole.holds),
        cauchy_schwarz: est.iter().all(|e| e.cauchy_schwarz_slack >= -1e-12),
        linf: est.iter().all(|e| e.linf_slack >= -1e-9),
    };
    let all_pass = hard_checks.decomposition
        && hard_checks.taubelow
        && hard_checks.pigeonhole
        && hard_checks.cauchy_schwarz
        && hard_checks.linf;

    let dir = cfg.output_dir();
    ensure_dir(&dir)?;
    let base = stem(input);
    let rows: Vec<DecompositionRow> = decompositions
        .iter()
        .map(|d| DecompositionRow {
            j: d.j,
            rho: d.rho,
            lhs: d.lhs,
            term1: d.term1,
            term2: d.term2,
            term3: d.term3,
            term4: d.term4,
            tail: d.tail,
            taubelow_bound: d.taubelow_bound,
            decomposition_holds: d.decomposition_holds,
            hypothesis_holds: d.hypothesis_holds,
        })
        .collect();
    write_csv(
        &dir.join(format!("{base}.decomposition.csv")),
        &["j", "rho", "lhs", "term1", "term2", "term3", "term4", "tail", "taubelow_bound", "decomposition_holds", "hypothesis_holds"],
        &rows,
    )?;
    let smallt_rows: Vec<SmalltCsvRow> = smallt
        .iter()
        .flat_map(|r| {
            r.rows.iter().map(move |row| SmalltCsvRow {
                j: r.j,
                rho: row.rho,
                scale: row.scale,
                deviation: row.deviation,
                ratio: row.ratio,
            })
        })
        .collect();
    write_csv(&dir.join(format!("{base}.smallt.csv")), &["j", "rho", "scale", "deviation", "ratio"], &smallt_rows)?;
    let decay_rows: Vec<DecayCsvRow> = decay
        .iter()
        .map(|r| DecayCsvRow {
            i_minus_n: r.i_minus_n,
            ratio: r.ratio,
            p: constants.p,
            seed: cfg.seed,
        })
        .collect();
    write_csv(&dir.join(format!("{base}.decay.csv")), &["i_minus_n", "ratio", "p", "seed"], &decay_rows)?;

    let outcome = HarnessOutcome {
        constants,
        rho_source,
        j0,
        blocks: ladder.len(),
        decompositions,
        skipped,
        smallt,
        square_sums,
        est,
        decay_exponent,
        decay,
        hard_checks,
    };
    let mut report = RunReport::new("harness", RunConfig { n: set.grid().n(), ..cfg.clone() }, outcome);
    report.inputs.push(digest(input)?);
    for (k, v) in timings {
        report.timings_ms.insert(k, v);
    }
    let path = dir.join(format!("{base}.harness.json"));
    write_json(&path, &report)?;
    println!(
        "harness: {} blocks evaluated, hard checks {} -> {}",
        report.outcome.decompositions.len(),
        if all_pass { "pass" } else { "FAIL" },
        path.display()
    );
    Ok(if all_pass { EXIT_OK } else { EXIT_REJECTED })
}

#[derive(Serialize)]
struct BenchOutcome {
    n: usize,
    repeat: usize,
}

pub fn bench_cmd(cfg: &RunConfig, repeat: usize) -> Result<u8, Error> {
    let grid = GridSpec::unit(cfg.n)?;
    let cutoff = cfg.cutoff()?;
    let params = cfg.params()?;
    let repeat = repeat.max(1);
    let mut report = RunReport::new("bench", cfg.clone(), BenchOutcome { n: cfg.n, repeat });
    let mut time = |name: &'static str, f: &mut dyn FnMut() -> Result<(), Error>| -> Result<(), Error> {
        let start = Instant::now();
        for _ in 0..repeat {
            f()?;
        }
        let ms = elapsed_ms(start) / repeat as f64;
        println!("{name:<18} {ms:>10.2} ms");
        report.timings_ms.insert(name, ms);
        Ok(())
    };
    let set = generate_random(grid, cfg.delta, cfg.seed)?;
    time("generate", &mut || generate_random(grid, cfg.delta, cfg.seed).map(drop))?;
    time("curve_average", &mut || {
        average_field(&cutoff, &set, 0.125);
        Ok(())
    })?;
    let field = set.indicator();
    time("poisson_smooth", &mut || poisson_smooth(&field, 0.01).map(drop))?;
    time("martingale", &mut || martingale_average(&field, DyadicLevel(3)).map(drop))?;
    let ladder = ScaleLadder::default_ladder(8)?
        .truncate_to_resolution(&grid, &params)
        .ok_or_else(|| Error::Argument("grid too coarse for any block".into()))?;
    let config = ProspectConfig {
        sampling: cfg.sampling(),
        subsample: cfg.subsample,
        seed: cfg.seed,
    };
    time("prospect", &mut || prospect(&set, &ladder, &cutoff, &config).map(drop))?;
    let dir = cfg.output_dir();
    ensure_dir(&dir)?;
    write_json(&dir.join("bench.json"), &report)?;
    Ok(EXIT_OK)
}
