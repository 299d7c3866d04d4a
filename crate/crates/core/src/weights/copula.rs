use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::pareto::UNIFORM_CEILING;
use crate::error::{Error, Result};

/// Smallest value returned for a copula coordinate.
const UNIFORM_FLOOR: f64 = f64::MIN_POSITIVE;

/// Positive stable variate with Laplace transform `exp(-t^index)`,
/// `0 < index < 1` (Kanter / Chambers-Mallows-Stuck representation).
fn positive_stable<R: Rng + ?Sized>(index: f64, rng: &mut R) -> f64 {
    let angle = PI * rng.random::<f64>();
    let e: f64 = Exp1.sample(rng);
    let a = index;
    let head = (a * angle).sin() / angle.sin().powf(1.0 / a);
    let tail = (((1.0 - a) * angle).sin() / e).powf((1.0 - a) / a);
    head * tail
}

/// Draws `n` rows from the `dim`-dimensional Gumbel copula with parameter
/// `theta`, returned column by column.
///
/// Uses the Marshall-Olkin frailty construction: `S` positive stable with
/// index `1/theta`, `E_i` i.i.d. unit exponentials,
/// `U_i = exp(-(E_i / S)^(1/theta))`. `theta == 1` is sampled directly as
/// independent uniforms.
pub fn sample_gumbel_uniforms<R: Rng + ?Sized>(
    n: usize,
    dim: usize,
    theta: f64,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    if !(theta >= 1.0 && theta.is_finite()) {
        return Err(Error::param("theta", format!("must be >= 1, got {theta}")));
    }
    if n == 0 {
        return Err(Error::param("n", "need at least one draw"));
    }
    if dim < 2 {
        return Err(Error::param("dim", format!("need at least 2 dimensions, got {dim}")));
    }
    let mut cols = vec![Vec::with_capacity(n); dim];
    if theta == 1.0 {
        for _ in 0..n {
            for col in cols.iter_mut() {
                col.push(rng.random::<f64>().max(UNIFORM_FLOOR));
            }
        }
        return Ok(cols);
    }
    let index = 1.0 / theta;
    for _ in 0..n {
        let s = positive_stable(index, rng);
        for col in cols.iter_mut() {
            let e: f64 = Exp1.sample(rng);
            let u = (-(e / s).powf(index)).exp();
            col.push(u.clamp(UNIFORM_FLOOR, UNIFORM_CEILING));
        }
    }
    Ok(cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamSeed;

    fn ks_uniform(sample: &[f64]) -> f64 {
        let mut s = sample.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len() as f64;
        s.iter()
            .enumerate()
            .map(|(i, &x)| {
                let hi = (i + 1) as f64 / n - x;
                let lo = x - i as f64 / n;
                hi.max(lo)
            })
            .fold(0.0, f64::max)
    }

    /// Kendall's tau for continuous data by counting inversions.
    fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
        let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
        let mut buf = ys.clone();
        let inv = count_inversions(&mut ys, &mut buf);
        let n = x.len() as f64;
        1.0 - 4.0 * inv as f64 / (n * (n - 1.0))
    }

    fn count_inversions(v: &mut [f64], buf: &mut [f64]) -> u64 {
        let n = v.len();
        if n < 2 {
            return 0;
        }
        let mid = n / 2;
        let mut inv = {
            let (l, r) = v.split_at_mut(mid);
            let (bl, br) = buf.split_at_mut(mid);
            count_inversions(l, bl) + count_inversions(r, br)
        };
        let (mut i, mut j, mut k) = (0, mid, 0);
        while i < mid && j < n {
            if v[i] <= v[j] {
                buf[k] = v[i];
                i += 1;
            } else {
                buf[k] = v[j];
                inv += (mid - i) as u64;
                j += 1;
            }
            k += 1;
        }
        buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
        k += mid - i;
        buf[k..k + n - j].copy_from_slice(&v[j..n]);
        v.copy_from_slice(&buf[..n]);
        inv
    }

    /// Kendall's tau of the bivariate Gumbel copula by 2-D midpoint
    /// quadrature of `1 - 4 * int C_u C_v`.
    fn gumbel_tau_quadrature(theta: f64, grid: usize) -> f64 {
        let h = 1.0 / grid as f64;
        let partial = |u: f64, v: f64| {
            let (x, y) = (-u.ln(), -v.ln());
            let a = x.powf(theta) + y.powf(theta);
            let c = (-a.powf(1.0 / theta)).exp();
            let common = c * a.powf(1.0 / theta - 1.0);
            (common * x.powf(theta - 1.0) / u, common * y.powf(theta - 1.0) / v)
        };
        let mut acc = 0.0;
        for i in 0..grid {
            let u = (i as f64 + 0.5) * h;
            for j in 0..grid {
                let v = (j as f64 + 0.5) * h;
                let (cu, cv) = partial(u, v);
                acc += cu * cv;
            }
        }
        1.0 - 4.0 * acc * h * h
    }

    fn pearson(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (a, b) in x.iter().zip(y) {
            sxy += (a - mx) * (b - my);
            sxx += (a - mx) * (a - mx);
            syy += (b - my) * (b - my);
        }
        sxy / (sxx * syy).sqrt()
    }

    #[test]
    fn independence_at_theta_one() {
        let mut rng = StreamSeed::new(11).rng();
        let cols = sample_gumbel_uniforms(100_000, 2, 1.0, &mut rng).unwrap();
        assert!(pearson(&cols[0], &cols[1]).abs() < 0.01);
        let joint = cols[0]
            .iter()
            .zip(&cols[1])
            .filter(|(u, v)| **u <= 0.5 && **v <= 0.5)
            .count() as f64
            / 100_000.0;
        assert!((joint - 0.25).abs() < 0.005, "C(0.5,0.5) = {joint}");
    }

    #[test]
    fn kendall_tau_matches_quadrature() {
        let oracle = gumbel_tau_quadrature(2.0, 3000);
        // closed form for this family is 1 - 1/theta
        assert!((oracle - 0.5).abs() < 2e-3, "quadrature tau {oracle}");
        let mut rng = StreamSeed::new(12).rng();
        let cols = sample_gumbel_uniforms(200_000, 2, 2.0, &mut rng).unwrap();
        let tau = kendall_tau(&cols[0], &cols[1]);
        assert!((tau - oracle).abs() < 0.01, "tau {tau} vs {oracle}");
    }

    #[test]
    fn marginals_are_uniform() {
        let crit = 1.628 / (100_000f64).sqrt();
        for (seed, theta) in [(1.0, 1.0), (2.0, 1.5), (3.0, 2.0), (4.0, 10.0)] {
            let mut rng = StreamSeed::new(seed as u64).rng();
            let cols = sample_gumbel_uniforms(100_000, 3, theta, &mut rng).unwrap();
            for col in &cols {
                let d = ks_uniform(col);
                assert!(d < crit, "theta={theta}: KS {d} >= {crit}");
                assert!(col.iter().all(|&u| u > 0.0 && u < 1.0));
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = StreamSeed::new(0).rng();
        assert!(sample_gumbel_uniforms(10, 2, 0.9, &mut rng).is_err());
        assert!(sample_gumbel_uniforms(10, 1, 2.0, &mut rng).is_err());
        assert!(sample_gumbel_uniforms(0, 2, 2.0, &mut rng).is_err());
    }
}
