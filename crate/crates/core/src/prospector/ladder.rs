use serde::{Deserialize, Serialize};

use crate::curve::{param_from_scale, CurveParams};
use crate::error::{Error, Result};
use crate::raster::GridSpec;

/// `2^ceil(log2 x)`, exact on powers of two.
pub fn dyadic_round_up(x: f64) -> Result<f64> {
    let down = dyadic_round_down(x)?;
    Ok(if down == x { down } else { 2.0 * down })
}

/// `2^floor(log2 x)`, exact on powers of two.
pub fn dyadic_round_down(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Argument(format!("cannot round {x} to a dyadic number")));
    }
    let mut e = x.log2().floor() as i32;
    // log2 may be off by one ulp near powers of two
    if 2f64.powi(e) > x {
        e -= 1;
    }
    if 2f64.powi(e + 1) <= x {
        e += 1;
    }
    Ok(2f64.powi(e))
}

fn is_dyadic(x: f64) -> bool {
    x > 0.0 && dyadic_round_down(x).map_or(false, |d| d == x)
}

/// `floor(delta^-c_prime) + 1`, the number of blocks the search needs.
pub fn j_bound(delta: f64, c_prime: f64) -> Result<usize> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Argument(format!("density {delta} must lie in (0, 1/2]")));
    }
    if !(c_prime >= 1.0) {
        return Err(Error::Argument(format!("exponent {c_prime} must be at least 1")));
    }
    Ok(delta.powf(-c_prime).floor() as usize + 1)
}

/// Interleaved dyadic scales `1 > b_1 > c_1 > b_2 > ... > b_J > c_J > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleLadder {
    entries: Vec<(f64, f64)>,
}

impl ScaleLadder {
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Argument("a ladder needs at least one block".into()));
        }
        let mut prev = 1.0;
        for (j, &(b, c)) in entries.iter().enumerate() {
            if !(is_dyadic(b) && is_dyadic(c)) {
                return Err(Error::Argument(format!("block {}: ({b}, {c}) is not dyadic", j + 1)));
            }
            if !(prev > b && b > c) {
                return Err(Error::Argument(format!(
                    "block {}: ({b}, {c}) breaks the interleaving below {prev}",
                    j + 1
                )));
            }
            prev = c;
        }
        Ok(Self { entries })
    }

    /// `b_j = 2^(-2j+1)`, `c_j = 2^(-2j)`.
    pub fn default_ladder(blocks: usize) -> Result<Self> {
        Self::new(
            (1..=blocks as i32)
                .map(|j| (2f64.powi(-2 * j + 1), 2f64.powi(-2 * j)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    /// `(b_j, c_j)` for 1-based `j`.
    pub fn block(&self, j: usize) -> Result<(f64, f64)> {
        j.checked_sub(1)
            .and_then(|k| self.entries.get(k))
            .copied()
            .ok_or_else(|| Error::Argument(format!("block {j} outside 1..={}", self.len())))
    }

    /// Coefficients `a = t^(1 - beta)` swept by block `j`, as `(lo, hi)`.
    pub fn a_interval(&self, j: usize, beta: f64) -> Result<(f64, f64)> {
        let (b, c) = self.block(j)?;
        let (x, y) = (param_from_scale(b, beta)?, param_from_scale(c, beta)?);
        Ok((x.min(y), x.max(y)))
    }

    /// Largest arc reach `theta * b_J` must span at least one cell.
    pub fn check_resolution(&self, grid: &GridSpec, params: &CurveParams) -> Result<()> {
        let (b, _) = *self.entries.last().expect("ladder is never empty");
        let reach = params.theta() * b;
        if reach < grid.cell_size() {
            return Err(Error::Unresolvable {
                scale: reach,
                cell: grid.cell_size(),
                min_n: grid.min_resolution_for(reach),
            });
        }
        Ok(())
    }

    /// Leading blocks whose arcs the grid can resolve, if any.
    pub fn truncate_to_resolution(&self, grid: &GridSpec, params: &CurveParams) -> Option<Self> {
        let keep = self
            .entries
            .iter()
            .take_while(|(b, _)| params.theta() * b >= grid.cell_size())
            .count();
        (keep > 0).then(|| Self {
            entries: self.entries[..keep].to_vec(),
        })
    }
}

/// Ladder on the normalized window from coefficient blocks `[big_b_j, big_c_j]`
/// of the unnormalized set, with `big_c_1 > big_b_1 > big_c_2 > big_b_2 > ...`.
///
/// Block `j` of the result comes from block `J + 1 - j` of the input, scaled by
/// the window side `2r` and rounded outward to dyadic numbers.
pub fn ladder_from_coefficients(big_b: &[f64], big_c: &[f64], beta: f64, r: f64) -> Result<ScaleLadder> {
    if big_b.len() != big_c.len() || big_b.is_empty() {
        return Err(Error::Argument("coefficient lists must be nonempty and of equal length".into()));
    }
    if !(beta > 1.0) {
        return Err(Error::Argument(format!("coefficient ladders need beta > 1, got {beta}")));
    }
    if !(r > 0.0) {
        return Err(Error::Argument(format!("window radius {r} must be positive")));
    }
    for k in 0..big_b.len() {
        if !(big_c[k] > big_b[k] && big_b[k] > 0.0) {
            return Err(Error::Argument(format!("need C > B > 0 in block {}", k + 1)));
        }
        if k + 1 < big_b.len() && big_c[k + 1] > big_b[k] / 8f64.powf(beta - 1.0) {
            return Err(Error::Argument(format!(
                "blocks {} and {} are not separated by 8^(beta-1)",
                k + 1,
                k + 2
            )));
        }
    }
    let inv = -1.0 / (beta - 1.0);
    let entries = (0..big_b.len())
        .rev()
        .map(|k| {
            let b = dyadic_round_up(big_b[k].powf(inv) / (2.0 * r))?;
            let c = dyadic_round_down(big_c[k].powf(inv) / (2.0 * r))?;
            Ok((b, c))
        })
        .collect::<Result<Vec<_>>>()?;
    ScaleLadder::new(entries)
}
