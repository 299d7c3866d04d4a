use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `f64` strictly below one. Uniform inputs are clamped here before
/// inversion so that sampled weights stay finite.
pub const UNIFORM_CEILING: f64 = 1.0 - f64::EPSILON / 2.0;

/// Pareto law with survival `P(V > v) = (k / v)^alpha` for `v >= k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParetoTail {
    pub alpha: f64,
    pub k: f64,
}

impl Default for ParetoTail {
    fn default() -> Self {
        ParetoTail { alpha: 1.1, k: 20.0 }
    }
}

impl ParetoTail {
    pub fn new(alpha: f64, k: f64) -> Result<Self> {
        let tail = ParetoTail { alpha, k };
        tail.validate()?;
        Ok(tail)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::param("alpha", format!("must be positive, got {}", self.alpha)));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::param("k", format!("must be positive, got {}", self.k)));
        }
        Ok(())
    }

    pub fn survival(&self, v: f64) -> f64 {
        if v <= self.k {
            1.0
        } else {
            (self.k / v).powf(self.alpha)
        }
    }

    /// Inverse CDF, `k * (1 - u)^(-1/alpha)` on `[0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::Domain(format!("pareto quantile needs u in [0, 1), got {u}")));
        }
        Ok(self.quantile_unchecked(u))
    }

    /// Quantile for sampler output; `u` is clamped to `[0, UNIFORM_CEILING]`.
    pub(crate) fn quantile_clamped(&self, u: f64) -> f64 {
        self.quantile_unchecked(u.clamp(0.0, UNIFORM_CEILING))
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        self.k * (1.0 - u).powf(-1.0 / self.alpha)
    }
}

/// Free-function form of [`ParetoTail::quantile`].
pub fn pareto_quantile(u: f64, tail: &ParetoTail) -> Result<f64> {
    tail.quantile(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Solves `survival(v) = 1 - u` by bisection on `[k, hi]`.
    fn bisect_quantile(tail: &ParetoTail, u: f64) -> f64 {
        let target = 1.0 - u;
        let (mut lo, mut hi) = (tail.k, tail.k);
        while tail.survival(hi) > target {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if tail.survival(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn lower_endpoint() {
        let tail = ParetoTail::default();
        assert_eq!(tail.quantile(0.0).unwrap(), 20.0);
    }

    #[test]
    fn median_matches_bisection() {
        let tail = ParetoTail::new(1.1, 20.0).unwrap();
        let oracle = bisect_quantile(&tail, 0.5);
        let got = pareto_quantile(0.5, &tail).unwrap();
        assert!((got - oracle).abs() <= 1e-10 * oracle, "{got} vs {oracle}");
    }

    #[test]
    fn survival_round_trip() {
        let tail = ParetoTail::default();
        for i in 10..=999 {
            let u = i as f64 / 1000.0;
            let v = tail.quantile(u).unwrap();
            let back = 1.0 - tail.survival(v);
            assert!((back - u).abs() <= 1e-12 * u, "u={u} back={back}");
        }
    }

    #[test]
    fn strictly_increasing() {
        let tail = ParetoTail::default();
        let mut prev = tail.quantile(0.0).unwrap();
        for i in 1..10_000 {
            let v = tail.quantile(i as f64 / 10_000.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn rejects_bad_input() {
        let tail = ParetoTail::default();
        assert!(matches!(tail.quantile(1.0), Err(Error::Domain(_))));
        assert!(matches!(tail.quantile(-0.1), Err(Error::Domain(_))));
        assert!(ParetoTail::new(0.0, 1.0).is_err());
        assert!(ParetoTail::new(1.0, -2.0).is_err());
    }

    #[test]
    fn clamped_quantile_is_finite() {
        let tail = ParetoTail::default();
        assert!(tail.quantile_clamped(1.0).is_finite());
        assert_eq!(tail.quantile_clamped(1.0), tail.quantile(UNIFORM_CEILING).unwrap());
    }
}
