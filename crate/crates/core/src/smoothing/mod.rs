//! Poisson smoothing, dyadic martingale averages, square functions and norms.

mod fft;
mod martingale;
mod norm;
mod poisson;
mod square;

pub use martingale::{level_range, martingale_average, martingale_difference, DyadicLevel};
pub use norm::lp_norm;
pub use poisson::{
    poisson_kernel, poisson_smooth, poisson_smooth_with, ConvolutionMethod, PoissonKernel,
    PoissonPlan, PoissonScale, DIRECT_TAP_LIMIT, TRUNCATION_FACTOR,
};
pub use square::{square_function_s1, square_function_s2, LevelRange};
