use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of the admissibility check for `(beta, eta, theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    /// Exponent the check ran on (`1 / beta` when `beta < 1`).
    pub beta: f64,
    /// `(theta / eta)^beta - beta * theta / eta`.
    pub value: f64,
    /// `beta - 1`.
    pub bound: f64,
    /// `bound - value`; positive iff admissible.
    pub slack: f64,
    pub admissible: bool,
}

/// Checks `(theta/eta)^beta - beta*(theta/eta) < beta - 1`, the condition that
/// lets the arc `{(u, u^beta) : eta <= u <= theta}` sit on the boundary of a
/// centrally symmetric convex set.
///
/// For `beta < 1` the check runs on the axis-swapped exponent `1 / beta`, with
/// `eta` and `theta` read as the support of the swapped arc.
pub fn validate_params(beta: f64, eta: f64, theta: f64) -> Result<Admissibility> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Argument(format!("exponent {beta} must be positive")));
    }
    if beta == 1.0 {
        return Err(Error::LinearCase);
    }
    if !(eta.is_finite() && theta.is_finite() && eta > 0.0) {
        return Err(Error::Argument(format!("eta {eta} must be positive")));
    }
    if theta <= eta {
        return Err(Error::Argument(format!(
            "theta {theta} must exceed eta {eta}"
        )));
    }
    let b = if beta < 1.0 { 1.0 / beta } else { beta };
    let r = theta / eta;
    let value = r.powf(b) - b * r;
    let bound = b - 1.0;
    Ok(Admissibility {
        beta: b,
        value,
        bound,
        slack: bound - value,
        admissible: value < bound,
    })
}

/// Exponent and cutoff support of the power arcs `v = a u^beta`.
///
/// Stores the exponent as given; when `beta < 1` every computation runs on the
/// axis-swapped system with exponent `1 / beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    beta: f64,
    eta: f64,
    theta: f64,
}

impl CurveParams {
    pub fn new(beta: f64, eta: f64, theta: f64) -> Result<Self> {
        let verdict = validate_params(beta, eta, theta)?;
        if !verdict.admissible {
            return Err(Error::Inadmissible(format!(
                "(theta/eta)^beta - beta*theta/eta = {} is not below beta - 1 = {}",
                verdict.value, verdict.bound
            )));
        }
        Ok(Self { beta, eta, theta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_swapped(&self) -> bool {
        self.beta < 1.0
    }

    /// The exponent the search and the operators run on; always above one.
    pub fn effective_beta(&self) -> f64 {
        if self.is_swapped() {
            1.0 / self.beta
        } else {
            self.beta
        }
    }

    /// Parameters of the axis-swapped system.
    pub fn swapped(&self) -> CurveParams {
        CurveParams {
            beta: 1.0 / self.beta,
            ..*self
        }
    }

    /// Farthest distance from the base point of the unit-scale arc,
    /// `sqrt(theta^2 + theta^(2 beta))`.
    pub fn reach(&self) -> f64 {
        let b = self.effective_beta();
        (self.theta * self.theta + self.theta.powf(2.0 * b)).sqrt()
    }
}

/// Curve coefficient detected at dilation scale `t`: `a = t^(1 - beta)`.
pub fn param_from_scale(t: f64, beta: f64) -> Result<f64> {
    if beta == 1.0 {
        return Err(Error::LinearCase);
    }
    if !(t > 0.0) {
        return Err(Error::Argument(format!("scale {t} must be positive")));
    }
    Ok(t.powf(1.0 - beta))
}

/// Inverse of [`param_from_scale`]: `t = a^(1 / (1 - beta))`.
pub fn scale_from_param(a: f64, beta: f64) -> Result<f64> {
    if beta == 1.0 {
        return Err(Error::LinearCase);
    }
    if !(a > 0.0) {
        return Err(Error::Argument(format!("coefficient {a} must be positive")));
    }
    Ok(a.powf(1.0 / (1.0 - beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn admissibility_examples() {
        // oracle: evaluate the polynomial by hand
        let v = validate_params(2.0, 1.0, 2.4).unwrap();
        assert!(v.admissible);
        assert_relative_eq!(v.value, 2.4 * 2.4 - 2.0 * 2.4, epsilon = 1e-15);
        assert_relative_eq!(v.value, 0.96, epsilon = 1e-12);

        let v = validate_params(2.0, 1.0, 2.5).unwrap();
        assert!(!v.admissible);
        assert_relative_eq!(v.value, 1.25, epsilon = 1e-12);
        assert!(v.slack < 0.0);

        assert!(validate_params(2.0, 1.0, 1.0).is_err());
        assert!(matches!(validate_params(1.0, 1.0, 2.0), Err(Error::LinearCase)));
    }

    #[test]
    fn swapped_exponent_validated() {
        let v = validate_params(0.5, 1.0, 2.4).unwrap();
        assert_eq!(v.beta, 2.0);
        assert!(v.admissible);
        let p = CurveParams::new(0.5, 0.5, 0.9).unwrap();
        assert!(p.is_swapped());
        assert_eq!(p.effective_beta(), 2.0);
        assert!(CurveParams::new(3.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(param_from_scale(0.5, 2.0).unwrap(), 2.0);
        assert_eq!(param_from_scale(1.0, 2.0).unwrap(), 1.0);
        for j in 1..=6 {
            let c = 2f64.powi(-2 * j);
            let b = 2f64.powi(-2 * j + 1);
            assert_eq!(param_from_scale(b, 2.0).unwrap(), 2f64.powi(2 * j - 1));
            assert_eq!(param_from_scale(c, 2.0).unwrap(), 2f64.powi(2 * j));
        }
        assert!(matches!(param_from_scale(0.5, 1.0), Err(Error::LinearCase)));
        assert!(matches!(scale_from_param(0.5, 1.0), Err(Error::LinearCase)));
    }

    proptest! {
        #[test]
        fn substitution_round_trip(t in 1e-4f64..10.0, beta in prop_oneof![1.05f64..6.0, 0.1f64..0.95]) {
            let a = param_from_scale(t, beta).unwrap();
            let back = scale_from_param(a, beta).unwrap();
            prop_assert!(((back - t) / t).abs() <= 1e-12);
        }

        #[test]
        fn substitution_monotone(t in 1e-3f64..4.0, dt in 1e-3f64..1.0, beta in 1.05f64..5.0) {
            let a0 = param_from_scale(t, beta).unwrap();
            let a1 = param_from_scale(t + dt, beta).unwrap();
            prop_assert!(a1 < a0);
            let a0 = param_from_scale(t, 1.0 / beta).unwrap();
            let a1 = param_from_scale(t + dt, 1.0 / beta).unwrap();
            prop_assert!(a1 > a0);
        }
    }
}
