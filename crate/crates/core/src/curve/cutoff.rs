use serde::{Deserialize, Serialize};

use super::params::CurveParams;
use crate::error::{Error, Result};

pub const DEFAULT_NODES: usize = 128;
pub const DEFAULT_PLATEAU: f64 = 0.5;

/// `exp(-1/x)` for `x > 0`, zero otherwise.
fn flat_exp(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth step from 0 at `x <= 0` to 1 at `x >= 1`.
fn smooth_step(x: f64) -> f64 {
    let a = flat_exp(x);
    let b = flat_exp(1.0 - x);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Smooth plateau bump on `[eta, theta]`: one on the centered subinterval of
/// length `plateau * (theta - eta)`, vanishing at both ends.
pub fn plateau_bump(u: f64, eta: f64, theta: f64, plateau: f64) -> f64 {
    if u <= eta || u >= theta {
        return 0.0;
    }
    let ramp = 0.5 * (1.0 - plateau) * (theta - eta);
    let left = (u - eta) / ramp;
    let right = (theta - u) / ramp;
    smooth_step(left.min(right))
}

/// Midpoint-rule discretization of the normalized arc measure.
///
/// Node `s_i` carries weight `w_i`; sampling at scale `t` from `(x, y)` reads
/// the point `(x + t s_i, y + t s_i^beta)`. Weights are strictly positive and
/// sum to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    params: CurveParams,
    plateau: f64,
    nodes: Vec<f64>,
    node_pows: Vec<f64>,
    weights: Vec<f64>,
}

impl Cutoff {
    pub fn new(params: CurveParams, m: usize, plateau: f64) -> Result<Self> {
        if m < 8 {
            return Err(Error::Argument(format!("need at least 8 nodes, got {m}")));
        }
        if !(plateau > 0.0 && plateau < 1.0) {
            return Err(Error::Argument(format!(
                "plateau fraction {plateau} must lie in (0, 1)"
            )));
        }
        let (eta, theta) = (params.eta(), params.theta());
        let beta = params.effective_beta();
        let du = (theta - eta) / m as f64;
        let mut nodes = Vec::with_capacity(m);
        let mut raw = Vec::with_capacity(m);
        for i in 0..m {
            let u = eta + (i as f64 + 0.5) * du;
            let w = plateau_bump(u, eta, theta, plateau) * du;
            if w > 0.0 {
                nodes.push(u);
                raw.push(w);
            }
        }
        let total: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / total).collect();
        let node_pows = nodes.iter().map(|u: &f64| u.powf(beta)).collect();
        Ok(Self {
            params,
            plateau,
            nodes,
            node_pows,
            weights,
        })
    }

    pub fn with_defaults(params: CurveParams) -> Self {
        Self::new(params, DEFAULT_NODES, DEFAULT_PLATEAU).expect("default cutoff is valid")
    }

    pub fn params(&self) -> &CurveParams {
        &self.params
    }

    pub fn plateau(&self) -> f64 {
        self.plateau
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `s_i^beta` for the effective exponent.
    pub fn node_pows(&self) -> &[f64] {
        &self.node_pows
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Same cutoff on the axis-swapped system.
    pub fn for_params(&self, params: CurveParams) -> Result<Self> {
        Self::new(params, self.nodes.len().max(8), self.plateau)
    }
}
