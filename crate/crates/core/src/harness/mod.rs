//! Numerical checks of the lower-bound chain behind the search: the
//! decomposition of curve averages across smoothing scales, square sums with
//! their pigeonhole block, and the decay of averages of martingale differences.

mod constants;
mod decay;
mod decomposition;
mod sums;

pub use constants::{compute_j0, HarnessConstants, DEFAULT_ALPHA, DEFAULT_C0, DEFAULT_P};
pub use decay::{decay_table, empirical_decay, fit_decay_exponent, DecayRow};
pub use decomposition::{
    check_smallt_scaling, compute_decomposition, pairing, smallt_deviation, smallt_for_field,
    DecompositionReport, SmalltReport, SmalltRow,
};
pub use sums::{compute_sq_sums, est_chain, pigeonhole, sq_sums_for_field, EstReport, Pigeonhole, SquareSums};
