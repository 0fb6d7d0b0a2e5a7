//! Search for pinned beams: a point of the set and a block of scales whose
//! every sampled power arc meets the set.

mod certificate;
mod construct;
mod ladder;
mod search;
mod window;

pub use certificate::{decimal, BeamCertificate, BeamSample};
pub use construct::reachable_cells;
pub use ladder::{dyadic_round_down, dyadic_round_up, j_bound, ladder_from_coefficients, ScaleLadder};
pub use search::{
    prospect, scan_outcomes, verify_certificate, BlockMiss, ExhaustionReport, Failure, Outcome,
    PairOutcome, PointMisses, ProspectConfig, Verdict,
};
pub use window::{find_dense_window, normalize_window, DenseWindow};
