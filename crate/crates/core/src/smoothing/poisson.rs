use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::fft::fft2;
use crate::error::{Error, Result};
use crate::raster::{Extension, GridSpec, ScalarField};

/// Kernel support is cut at this multiple of `t`.
pub const TRUNCATION_FACTOR: f64 = 50.0;
/// Kernels with more taps than this are applied through the FFT.
pub const DIRECT_TAP_LIMIT: usize = 10_000;
/// Radius (in cells) up to which the normalizing mass is summed tap by tap.
const EXACT_MASS_RADIUS: f64 = 1024.0;
/// Half-width (in cells) of the exactly summed core otherwise.
const EXACT_CORE: i64 = 512;

/// `phi_t(x, y) = t / (2 pi (t^2 + x^2 + y^2)^(3/2))`.
pub fn poisson_kernel(t: f64, x: f64, y: f64) -> f64 {
    t / (2.0 * PI * (t * t + x * x + y * y).powf(1.5))
}

/// Mass of `phi_t` on the disk of radius `r`.
fn disk_mass(t: f64, r: f64) -> f64 {
    1.0 - t / (t * t + r * r).sqrt()
}

/// Mass of `phi_t` on the square `[-a, a]^2`.
fn square_mass(t: f64, a: f64) -> f64 {
    2.0 / PI * (a * a / (t * (t * t + 2.0 * a * a).sqrt())).atan()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonScale {
    pub t: f64,
    /// Kernel support radius.
    pub truncation: f64,
}

impl PoissonScale {
    pub fn new(t: f64) -> Result<Self> {
        Self::with_truncation(t, TRUNCATION_FACTOR * t)
    }

    pub fn with_truncation(t: f64, truncation: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Argument(format!("Poisson scale {t} must be positive")));
        }
        if !(truncation > 0.0) {
            return Err(Error::Argument("truncation radius must be positive".into()));
        }
        Ok(Self { t, truncation })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ConvolutionMethod {
    #[default]
    Auto,
    Direct,
    Transform,
}

/// Truncated Poisson kernel sampled at cell-center offsets, scaled so that the
/// taps inside the truncation disk sum to one.
#[derive(Clone, Debug)]
pub struct PoissonKernel {
    scale: PoissonScale,
    half: usize,
    taps: Vec<f64>,
    nonzero: usize,
    normalizer: f64,
}

impl PoissonKernel {
    pub fn new(scale: PoissonScale, grid: &GridSpec) -> Self {
        let h = grid.cell_size();
        let rc = scale.truncation / h;
        let normalizer = mass_in_disk(scale.t, scale.truncation, h);
        let half = (rc.floor() as usize).min(grid.n() - 1);
        let width = 2 * half + 1;
        let mut taps = vec![0.0; width * width];
        let mut nonzero = 0;
        let r2 = scale.truncation * scale.truncation;
        for l in 0..width {
            let y = (l as f64 - half as f64) * h;
            for k in 0..width {
                let x = (k as f64 - half as f64) * h;
                if x * x + y * y <= r2 {
                    taps[l * width + k] = poisson_kernel(scale.t, x, y) * h * h / normalizer;
                    nonzero += 1;
                }
            }
        }
        Self {
            scale,
            half,
            taps,
            nonzero,
            normalizer,
        }
    }

    pub fn scale(&self) -> PoissonScale {
        self.scale
    }

    /// Half-width of the stored tap box, in cells.
    pub fn half_width(&self) -> usize {
        self.half
    }

    /// Number of taps that can touch the window.
    pub fn tap_count(&self) -> usize {
        self.nonzero
    }

    /// Discrete mass of the untruncated samples inside the disk before scaling.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Tap at offset `(dx, dy)` cells.
    pub fn tap(&self, dx: i64, dy: i64) -> f64 {
        let h = self.half as i64;
        if dx.abs() > h || dy.abs() > h {
            return 0.0;
        }
        let w = 2 * self.half + 1;
        self.taps[(dy + h) as usize * w + (dx + h) as usize]
    }

    pub fn stored_mass(&self) -> f64 {
        self.taps.iter().sum()
    }
}

/// Sum of `phi_t(kh, lh) h^2` over the lattice points of the disk of radius `r`.
fn mass_in_disk(t: f64, r: f64, h: f64) -> f64 {
    let rc = r / h;
    let exact = |half: i64, within: &dyn Fn(i64, i64) -> bool| -> f64 {
        // quadrant symmetry: weight axis terms once per sign
        let mut sum = 0.0;
        for l in 0..=half {
            let y = l as f64 * h;
            let mut row = 0.0;
            for k in 0..=half {
                if !within(k, l) {
                    continue;
                }
                let x = k as f64 * h;
                let mult = if k == 0 { 1.0 } else { 2.0 };
                row += mult * poisson_kernel(t, x, y);
            }
            sum += if l == 0 { row } else { 2.0 * row };
        }
        sum * h * h
    };
    if rc <= EXACT_MASS_RADIUS {
        let half = rc.floor() as i64;
        let r2 = r * r;
        exact(half, &|k, l| {
            let (x, y) = (k as f64 * h, l as f64 * h);
            x * x + y * y <= r2
        })
    } else {
        let core = exact(EXACT_CORE, &|_, _| true);
        let a = (EXACT_CORE as f64 + 0.5) * h;
        core + disk_mass(t, r) - square_mass(t, a)
    }
}

fn check_extension(field: &ScalarField) -> (Vec<f64>, f64) {
    let v = field.extension().outside();
    let shifted = if v == 0.0 {
        field.values().to_vec()
    } else {
        field.values().iter().map(|x| x - v).collect()
    };
    (shifted, v)
}

/// `P_t h`: convolution with the truncated, renormalized Poisson kernel,
/// evaluated on the input window.
pub fn poisson_smooth(field: &ScalarField, t: f64) -> Result<ScalarField> {
    poisson_smooth_with(field, PoissonScale::new(t)?, ConvolutionMethod::Auto)
}

pub fn poisson_smooth_with(
    field: &ScalarField,
    scale: PoissonScale,
    method: ConvolutionMethod,
) -> Result<ScalarField> {
    let kernel = PoissonKernel::new(scale, field.grid());
    let use_direct = match method {
        ConvolutionMethod::Direct => true,
        ConvolutionMethod::Transform => false,
        ConvolutionMethod::Auto => kernel.tap_count() <= DIRECT_TAP_LIMIT,
    };
    if use_direct {
        Ok(convolve_direct(field, &kernel))
    } else {
        Ok(PoissonPlan::new(field).apply(&kernel))
    }
}

fn convolve_direct(field: &ScalarField, kernel: &PoissonKernel) -> ScalarField {
    let grid = *field.grid();
    let n = grid.n() as i64;
    let (input, outside) = check_extension(field);
    let half = kernel.half as i64;
    let w = 2 * kernel.half + 1;
    // sparse list of taps inside the disk
    let mut taps = Vec::with_capacity(kernel.nonzero);
    for dy in -half..=half {
        for dx in -half..=half {
            let v = kernel.taps[(dy + half) as usize * w + (dx + half) as usize];
            if v != 0.0 {
                taps.push((dx, dy, v));
            }
        }
    }
    let mut out = vec![0.0; grid.cell_count()];
    for j in 0..n {
        for i in 0..n {
            let mut acc = 0.0;
            for &(dx, dy, v) in &taps {
                let (qi, qj) = (i - dx, j - dy);
                if qi >= 0 && qi < n && qj >= 0 && qj < n {
                    acc += v * input[(qj * n + qi) as usize];
                }
            }
            out[(j * n + i) as usize] = acc + outside;
        }
    }
    ScalarField::from_raw(grid, out, field.extension())
}

/// Cached spectrum of one input field, for smoothing it at many scales.
pub struct PoissonPlan {
    grid: GridSpec,
    extension: Extension,
    outside: f64,
    size: usize,
    spectrum: Vec<Complex<f64>>,
    planner: FftPlanner<f64>,
}

impl PoissonPlan {
    pub fn new(field: &ScalarField) -> Self {
        let grid = *field.grid();
        let n = grid.n();
        let p = 2 * n;
        let (input, outside) = check_extension(field);
        let mut spectrum = vec![Complex::default(); p * p];
        for j in 0..n {
            for i in 0..n {
                spectrum[j * p + i] = Complex::new(input[j * n + i], 0.0);
            }
        }
        let mut planner = FftPlanner::new();
        fft2(&mut planner, &mut spectrum, p, false);
        Self {
            grid,
            extension: field.extension(),
            outside,
            size: p,
            spectrum,
            planner,
        }
    }

    pub fn smooth(&mut self, t: f64) -> Result<ScalarField> {
        let kernel = PoissonKernel::new(PoissonScale::new(t)?, &self.grid);
        Ok(self.apply(&kernel))
    }

    pub fn apply(&mut self, kernel: &PoissonKernel) -> ScalarField {
        let p = self.size;
        let n = self.grid.n();
        let half = kernel.half as i64;
        let w = 2 * kernel.half + 1;
        let mut buf = vec![Complex::default(); p * p];
        for dy in -half..=half {
            let row = dy.rem_euclid(p as i64) as usize;
            for dx in -half..=half {
                let v = kernel.taps[(dy + half) as usize * w + (dx + half) as usize];
                if v != 0.0 {
                    let col = dx.rem_euclid(p as i64) as usize;
                    buf[row * p + col] = Complex::new(v, 0.0);
                }
            }
        }
        fft2(&mut self.planner, &mut buf, p, false);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        fft2(&mut self.planner, &mut buf, p, true);
        let norm = 1.0 / (p * p) as f64;
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                out.push(buf[j * p + i].re * norm + self.outside);
            }
        }
        ScalarField::from_raw(self.grid, out, self.extension)
    }
}
