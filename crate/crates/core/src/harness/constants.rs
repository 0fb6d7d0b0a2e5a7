use serde::{Deserialize, Serialize};

use crate::curve::CurveParams;
use crate::error::{Error, Result};
use crate::prospector::dyadic_round_down;

/// Exponent and scale constants of the proof chain, with the defaults used
/// when only a density is known.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarnessConstants {
    pub p: f64,
    pub alpha: f64,
    pub c0: f64,
    pub tau: f64,
    /// Dyadic scale separation, in `(0, 1)`.
    pub rho: f64,
}

pub const DEFAULT_P: f64 = 3.0;
pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_C0: f64 = 1.0;

impl HarnessConstants {
    pub fn new(p: f64, alpha: f64, c0: f64, tau: f64, rho: f64) -> Result<Self> {
        if !(p > 2.0 && p.is_finite()) {
            return Err(Error::Argument(format!("exponent p = {p} must exceed 2")));
        }
        if !(alpha > 0.0 && c0 > 0.0) {
            return Err(Error::Argument("alpha and c0 must be positive".into()));
        }
        if !(tau > 0.0) {
            return Err(Error::Argument(format!("tau = {tau} must be positive")));
        }
        if !(rho > 0.0 && rho < 1.0) || dyadic_round_down(rho)? != rho {
            return Err(Error::Argument(format!("rho = {rho} must be a dyadic number below 1")));
        }
        Ok(Self { p, alpha, c0, tau, rho })
    }

    /// `tau = c0 delta^2 / 8` and `rho` the largest dyadic number not above
    /// `min(delta^(2/alpha), delta^2) / 8`.
    pub fn from_density(delta: f64, alpha: f64, c0: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::Argument(format!("density {delta} must lie in (0, 1]")));
        }
        let tau = c0 * delta * delta / 8.0;
        let rho = dyadic_round_down(delta.powf(2.0 / alpha).min(delta * delta) / 8.0)?;
        Self::new(DEFAULT_P, alpha, c0, tau, rho)
    }

    pub fn with_rho(self, rho: f64) -> Result<Self> {
        Self::new(self.p, self.alpha, self.c0, self.tau, rho)
    }

    pub fn with_tau(self, tau: f64) -> Result<Self> {
        Self::new(self.p, self.alpha, self.c0, tau, self.rho)
    }
}

/// Smallest `J0 >= 0` with `4^(-J0) * reach < tau`: from block `J0 + 1` on,
/// every arc based at distance `tau` from the window edge stays inside.
pub fn compute_j0(tau: f64, params: &CurveParams) -> Result<usize> {
    if !(tau > 0.0) {
        return Err(Error::Argument(format!("tau = {tau} must be positive")));
    }
    let reach = params.reach();
    let mut j0 = 0;
    while 4f64.powi(-(j0 as i32)) * reach >= tau {
        j0 += 1;
    }
    Ok(j0)
}
