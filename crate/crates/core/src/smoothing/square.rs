use super::martingale::{martingale_average, DyadicLevel};
use super::poisson::PoissonPlan;
use crate::error::{Error, Result};
use crate::raster::ScalarField;

/// Inclusive range of dyadic indices `i` in the square-function sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelRange {
    pub lo: i32,
    pub hi: i32,
}

impl LevelRange {
    pub fn new(lo: i32, hi: i32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Argument(format!("empty level range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    fn check(&self, field: &ScalarField) -> Result<()> {
        let h = field.grid().cell_size();
        let finest = 2f64.powi(-self.hi);
        if finest < h {
            return Err(Error::Unresolvable {
                scale: finest,
                cell: h,
                min_n: field.grid().min_resolution_for(finest),
            });
        }
        Ok(())
    }
}

fn accumulate(sum_sq: &mut [f64], a: &ScalarField, b: &ScalarField) {
    for ((s, x), y) in sum_sq.iter_mut().zip(a.values()).zip(b.values()) {
        let d = x - y;
        *s += d * d;
    }
}

/// `S1 h = (sum_i |P_{2^{-i+1}} h - P_{2^{-i}} h|^2)^(1/2)`.
pub fn square_function_s1(field: &ScalarField, range: LevelRange) -> Result<ScalarField> {
    range.check(field)?;
    let mut plan = PoissonPlan::new(field);
    let mut sum_sq = vec![0.0; field.values().len()];
    let mut coarser = plan.smooth(2f64.powi(-range.lo + 1))?;
    for i in range.lo..=range.hi {
        let finer = plan.smooth(2f64.powi(-i))?;
        accumulate(&mut sum_sq, &coarser, &finer);
        coarser = finer;
    }
    Ok(ScalarField::from_raw(
        *field.grid(),
        sum_sq.into_iter().map(f64::sqrt).collect(),
        Default::default(),
    ))
}

/// `S2 h = (sum_i |P_{2^{-i}} h - E_i h|^2)^(1/2)`.
pub fn square_function_s2(field: &ScalarField, range: LevelRange) -> Result<ScalarField> {
    range.check(field)?;
    let mut plan = PoissonPlan::new(field);
    let mut sum_sq = vec![0.0; field.values().len()];
    for i in range.lo..=range.hi {
        let p = plan.smooth(2f64.powi(-i))?;
        let e = martingale_average(field, DyadicLevel(i))?;
        accumulate(&mut sum_sq, &p, &e);
    }
    Ok(ScalarField::from_raw(
        *field.grid(),
        sum_sq.into_iter().map(f64::sqrt).collect(),
        Default::default(),
    ))
}
