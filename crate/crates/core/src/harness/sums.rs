use serde::{Deserialize, Serialize};

use super::constants::HarnessConstants;
use super::decomposition::{exact_log2, pairing, resolvable};
use crate::error::{Error, Result};
use crate::prospector::ScaleLadder;
use crate::raster::{RasterSet, ScalarField};
use crate::smoothing::{lp_norm, martingale_average, poisson_smooth, DyadicLevel, PoissonPlan};

/// An index whose two summands are both at most twice their average.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pigeonhole {
    /// Position in the summand lists.
    pub index: usize,
    pub first: f64,
    pub second: f64,
    pub first_bound: f64,
    pub second_bound: f64,
    pub holds: bool,
}

/// Picks the index minimizing the larger of `first[k] / bound1` and
/// `second[k] / bound2`, where `bound = 2 * sum / len`. Fewer than half of the
/// indices exceed either bound, so the winner always satisfies both.
pub fn pigeonhole(first: &[f64], second: &[f64]) -> Result<Pigeonhole> {
    if first.is_empty() || first.len() != second.len() {
        return Err(Error::Argument("summand lists must be nonempty and of equal length".into()));
    }
    let n = first.len() as f64;
    let b1 = 2.0 * first.iter().sum::<f64>() / n;
    let b2 = 2.0 * second.iter().sum::<f64>() / n;
    let rel = |v: f64, bound: f64| if v == 0.0 { 0.0 } else { v / bound };
    let score = |k: usize| rel(first[k], b1).max(rel(second[k], b2));
    let index = (0..first.len())
        .min_by(|&a, &b| score(a).total_cmp(&score(b)))
        .expect("nonempty");
    Ok(Pigeonhole {
        index,
        first: first[index],
        second: second[index],
        first_bound: b1,
        second_bound: b2,
        holds: first[index] <= b1 && second[index] <= b2,
    })
}

/// Per-block `p`-th powers of the Poisson-Poisson and Poisson-martingale
/// differences of `g`, their sums, and the pigeonhole block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareSums {
    /// Blocks `j0 + 1 ..= j_max`.
    pub blocks: Vec<usize>,
    pub poisson_terms: Vec<f64>,
    pub martingale_terms: Vec<f64>,
    pub poisson_sum: f64,
    pub martingale_sum: f64,
    pub g_norm_p: f64,
    /// `poisson_sum / (log2(1/rho)^p * ||g||_p^p)`.
    pub poisson_constant: f64,
    /// `martingale_sum / ||g||_p^p`.
    pub martingale_constant: f64,
    pub selected_block: usize,
    pub pigeonhole: Pigeonhole,
}

pub fn compute_sq_sums(
    set: &RasterSet,
    ladder: &ScaleLadder,
    j0: usize,
    j_max: usize,
    constants: &HarnessConstants,
) -> Result<SquareSums> {
    sq_sums_for_field(&set.complement_in_window(), ladder, j0, j_max, constants)
}

pub fn sq_sums_for_field(
    g: &ScalarField,
    ladder: &ScaleLadder,
    j0: usize,
    j_max: usize,
    constants: &HarnessConstants,
) -> Result<SquareSums> {
    if j_max <= j0 || j_max > ladder.len() {
        return Err(Error::Argument(format!(
            "block range {}..={j_max} is empty or exceeds the ladder",
            j0 + 1
        )));
    }
    let (rho, p) = (constants.rho, constants.p);
    let probe = RasterSet::empty(*g.grid());
    let mut plan = PoissonPlan::new(g);
    let mut poisson_terms = Vec::new();
    let mut martingale_terms = Vec::new();
    for j in j0 + 1..=j_max {
        let (b, c) = ladder.block(j)?;
        let fine = rho * c;
        resolvable(&probe, fine)?;
        let k = exact_log2(fine).ok_or_else(|| Error::Argument(format!("rho c_j = {fine} is not dyadic")))?;
        let pc = plan.smooth(fine)?;
        let pb = plan.smooth(b / rho)?;
        let e = martingale_average(g, DyadicLevel(-k))?;
        poisson_terms.push(lp_norm(&pb.sub(&pc)?, p)?.powf(p));
        martingale_terms.push(lp_norm(&pc.sub(&e)?, p)?.powf(p));
    }
    let poisson_sum: f64 = poisson_terms.iter().sum();
    let martingale_sum: f64 = martingale_terms.iter().sum();
    let g_norm_p = lp_norm(g, p)?.powf(p);
    let ratio = |s: f64, d: f64| if s == 0.0 { 0.0 } else { s / d };
    let pick = pigeonhole(&poisson_terms, &martingale_terms)?;
    Ok(SquareSums {
        blocks: (j0 + 1..=j_max).collect(),
        poisson_sum,
        martingale_sum,
        g_norm_p,
        poisson_constant: ratio(poisson_sum, (1.0 / rho).log2().powf(p) * g_norm_p),
        martingale_constant: ratio(martingale_sum, g_norm_p),
        selected_block: j0 + 1 + pick.index,
        pigeonhole: pick,
        poisson_terms,
        martingale_terms,
    })
}

/// Quantities of the lower-bound chain for one indicator and one Poisson scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstReport {
    pub mass: f64,
    /// `min_k (integral f E_k f - (integral f)^2)` over admissible levels.
    pub cauchy_schwarz_slack: f64,
    pub scale: f64,
    /// `integral f P_s 1_window`.
    pub poisson_of_window: f64,
    /// `mass - poisson_of_window`.
    pub linf_slack: f64,
    /// `integral f P_s f`.
    pub poisson_self: f64,
    /// `poisson_self / mass^2`.
    pub c0: f64,
}

pub fn est_chain(set: &RasterSet, s: f64) -> Result<EstReport> {
    let f = set.indicator();
    let grid = *set.grid();
    let mass = set.measure();
    let (lo, hi) = crate::smoothing::level_range(&grid)
        .ok_or_else(|| Error::Argument("window is not dyadically aligned".into()))?;
    let mut cs = f64::INFINITY;
    for k in lo.0..=hi.0 {
        let ef = martingale_average(&f, DyadicLevel(k))?;
        cs = cs.min(pairing(set, &ef)? - mass * mass);
    }
    let window = poisson_smooth(&ScalarField::constant(grid, 1.0), s)?;
    let poisson_of_window = pairing(set, &window)?;
    let poisson_self = pairing(set, &poisson_smooth(&f, s)?)?;
    Ok(EstReport {
        mass,
        cauchy_schwarz_slack: cs,
        scale: s,
        poisson_of_window,
        linf_slack: mass - poisson_of_window,
        poisson_self,
        c0: if mass > 0.0 { poisson_self / (mass * mass) } else { 0.0 },
    })
}
