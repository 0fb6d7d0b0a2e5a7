use serde::{Deserialize, Serialize};

use crate::curve::CurveParams;
use crate::error::{Error, Result};

/// Reals travel as decimal strings with 17 significant digits, which
/// round-trips every finite `f64` exactly.
pub mod decimal {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn format(x: f64) -> String {
        format!("{x:.16e}")
    }

    pub fn parse(s: &str) -> Result<f64, String> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("not a finite decimal: {s:?}"))
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(D::Error::custom)
    }

    pub mod pair {
        use super::*;
        use serde::ser::SerializeTuple;

        pub fn serialize<S: Serializer>(x: &[f64; 2], s: S) -> Result<S::Ok, S::Error> {
            let mut t = s.serialize_tuple(2)?;
            t.serialize_element(&format(x[0]))?;
            t.serialize_element(&format(x[1]))?;
            t.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
            let [a, b] = <[String; 2]>::deserialize(d)?;
            Ok([parse(&a).map_err(D::Error::custom)?, parse(&b).map_err(D::Error::custom)?])
        }
    }
}

/// One sampled scale of a certified block and the arc point found in the set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamSample {
    #[serde(with = "decimal")]
    pub t: f64,
    #[serde(with = "decimal")]
    pub a: f64,
    #[serde(with = "decimal")]
    pub u: f64,
    #[serde(with = "decimal::pair")]
    pub hit: [f64; 2],
}

/// A point of the set and a block of scales whose every sampled arc meets it.
///
/// Coordinates, coefficients and displacements are in the frame of the
/// original exponent, so `hit = (x + u, y + a u^beta)` for every sample. When
/// `beta < 1` the scales `t` are those of the axis-swapped search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamCertificate {
    #[serde(with = "decimal")]
    pub beta: f64,
    #[serde(with = "decimal")]
    pub eta: f64,
    #[serde(with = "decimal")]
    pub theta: f64,
    #[serde(with = "decimal::pair")]
    pub point: [f64; 2],
    pub j: usize,
    #[serde(with = "decimal::pair")]
    pub t_interval: [f64; 2],
    #[serde(with = "decimal::pair")]
    pub a_interval: [f64; 2],
    #[serde(with = "decimal")]
    pub t_grid_ratio: f64,
    pub samples: Vec<BeamSample>,
    #[serde(with = "decimal::pair")]
    pub gap: [f64; 2],
}

impl BeamCertificate {
    pub fn params(&self) -> Result<CurveParams> {
        CurveParams::new(self.beta, self.eta, self.theta)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: Self = serde_json::from_str(text)?;
        if cert.samples.is_empty() {
            return Err(Error::Argument("certificate has no samples".into()));
        }
        Ok(cert)
    }

    /// The same certificate seen in the axis-swapped frame, where the exponent
    /// is `1 / beta` and coefficients map by `a -> a^(-1/beta)`.
    pub fn swapped(&self) -> Self {
        let swap = |p: [f64; 2]| [p[1], p[0]];
        let beta = 1.0 / self.beta;
        let point = swap(self.point);
        let samples: Vec<BeamSample> = self
            .samples
            .iter()
            .map(|s| {
                let hit = swap(s.hit);
                BeamSample {
                    t: s.t,
                    a: s.a.powf(-1.0 / self.beta),
                    u: hit[0] - point[0],
                    hit,
                }
            })
            .collect();
        let lo = self.a_interval[0].powf(-1.0 / self.beta);
        let hi = self.a_interval[1].powf(-1.0 / self.beta);
        Self {
            beta,
            eta: self.eta,
            theta: self.theta,
            point,
            j: self.j,
            t_interval: self.t_interval,
            a_interval: [lo.min(hi), lo.max(hi)],
            t_grid_ratio: self.t_grid_ratio,
            gap: gap_of(&samples),
            samples,
        }
    }
}

pub(crate) fn gap_of(samples: &[BeamSample]) -> [f64; 2] {
    samples.iter().fold([f64::INFINITY, f64::NEG_INFINITY], |g, s| {
        [g[0].min(s.u), g[1].max(s.u)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2f64.powi(-40), 123456.789, f64::MIN_POSITIVE] {
            assert_eq!(decimal::parse(&decimal::format(x)).unwrap(), x);
        }
        assert!(decimal::parse("nan").is_err());
        assert!(decimal::parse("1e400").is_err());
    }

    #[test]
    fn json_shape() {
        let c = BeamCertificate {
            beta: 2.0,
            eta: 0.5,
            theta: 0.9,
            point: [0.25, 0.75],
            j: 1,
            t_interval: [0.25, 0.5],
            a_interval: [2.0, 4.0],
            t_grid_ratio: 2f64.powf(1.0 / 16.0),
            samples: vec![BeamSample {
                t: 0.25,
                a: 4.0,
                u: 0.125,
                hit: [0.375, 0.8125],
            }],
            gap: [0.125, 0.125],
        };
        let text = c.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["beta"], "2.0000000000000000e0");
        assert_eq!(v["j"], 1);
        assert_eq!(v["samples"][0]["hit"][1], "8.1250000000000000e-1");
        assert_eq!(BeamCertificate::from_json(&text).unwrap(), c);
    }
}
