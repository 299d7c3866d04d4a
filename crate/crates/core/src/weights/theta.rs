use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Law of the angular component `Theta` in the polar construction
/// `W = (V * Theta, V * (1 - Theta))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum ThetaLaw {
    /// `Theta` is the constant `c`.
    Constant { c: f64 },
    /// `(c2 - c1) * X + c1` with `X ~ Beta(b1, b2)`.
    ScaledBeta { b1: f64, b2: f64, c1: f64, c2: f64 },
    Beta { b1: f64, b2: f64 },
    /// `Theta` is 1 with probability `p`, else 0.
    Bernoulli { p: f64 },
}

impl ThetaLaw {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be positive, got {v}")))
            }
        };
        match *self {
            ThetaLaw::Constant { c } => {
                if !(c > 0.0 && c < 1.0) {
                    return Err(Error::param("c", format!("must lie in (0, 1), got {c}")));
                }
            }
            ThetaLaw::ScaledBeta { b1, b2, c1, c2 } => {
                positive("b1", b1)?;
                positive("b2", b2)?;
                if !(0.0 <= c1 && c1 < c2 && c2 <= 1.0) {
                    return Err(Error::param(
                        "c1/c2",
                        format!("need 0 <= c1 < c2 <= 1, got c1={c1}, c2={c2}"),
                    ));
                }
            }
            ThetaLaw::Beta { b1, b2 } => {
                positive("b1", b1)?;
                positive("b2", b2)?;
            }
            ThetaLaw::Bernoulli { p } => {
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::param("p", format!("must lie in (0, 1), got {p}")));
                }
            }
        }
        Ok(())
    }

    /// Whether `Theta` and `1 - Theta` have the same law.
    pub fn is_symmetric(&self) -> bool {
        const EPS: f64 = 1e-12;
        match *self {
            ThetaLaw::Constant { c } => (c - 0.5).abs() < EPS,
            ThetaLaw::ScaledBeta { b1, b2, c1, c2 } => {
                (b1 - b2).abs() < EPS && (c1 + c2 - 1.0).abs() < EPS
            }
            ThetaLaw::Beta { b1, b2 } => (b1 - b2).abs() < EPS,
            ThetaLaw::Bernoulli { p } => (p - 0.5).abs() < EPS,
        }
    }

    pub fn sampler(&self) -> Result<ThetaSampler> {
        self.validate()?;
        let beta = |b1, b2| {
            Beta::new(b1, b2).map_err(|e| Error::param("b1/b2", e.to_string()))
        };
        Ok(match *self {
            ThetaLaw::Constant { c } => ThetaSampler::Constant(c),
            ThetaLaw::ScaledBeta { b1, b2, c1, c2 } => ThetaSampler::Scaled {
                beta: beta(b1, b2)?,
                offset: c1,
                width: c2 - c1,
            },
            ThetaLaw::Beta { b1, b2 } => ThetaSampler::Scaled {
                beta: beta(b1, b2)?,
                offset: 0.0,
                width: 1.0,
            },
            ThetaLaw::Bernoulli { p } => ThetaSampler::Bernoulli(p),
        })
    }
}

/// Prepared sampler for a [`ThetaLaw`].
#[derive(Clone, Copy, Debug)]
pub enum ThetaSampler {
    Constant(f64),
    Scaled { beta: Beta<f64>, offset: f64, width: f64 },
    Bernoulli(f64),
}

impl Distribution<f64> for ThetaSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ThetaSampler::Constant(c) => *c,
            ThetaSampler::Scaled { beta, offset, width } => {
                (width * beta.sample(rng) + offset).clamp(0.0, 1.0)
            }
            ThetaSampler::Bernoulli(p) => {
                if rng.random::<f64>() < *p {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}
