//! True upper tail dependence of each weight scenario.
//!
//! For the polar construction `W = (V * Theta, V * (1 - Theta))` with
//! `V ~ Pareto(alpha, k)` independent of `Theta`, every threshold `x >= k`
//! gives `P(V * Theta > x) = (k / x)^alpha * E[Theta^alpha]`, and likewise for
//! the joint event with `min(Theta, 1 - Theta)`. For a symmetric `Theta` the
//! two marginal quantiles coincide, so
//! `lambda_U = E[min(Theta, 1 - Theta)^alpha] / E[Theta^alpha]`.
//! [`mrv_true_utd`] evaluates that ratio by quadrature;
//! [`mrv_true_utd_monte_carlo`] estimates the conditional exceedance
//! probability at a finite level by simulation and shares no code with it.

use rand::Rng;
use rand_distr::Distribution;

use super::{ParetoTail, ThetaLaw};
use crate::error::{Error, Result};
use crate::rng::StreamSeed;

/// `2 - 2^(1/theta)`.
pub fn gumbel_true_utd(theta: f64) -> Result<f64> {
    if !(theta >= 1.0) {
        return Err(Error::param("theta", format!("must be >= 1, got {theta}")));
    }
    Ok(2.0 - 2f64.powf(1.0 / theta))
}

/// Quadrature value of the polar-construction UTD, accurate to `precision`.
pub fn mrv_true_utd(theta_law: &ThetaLaw, tail: &ParetoTail, precision: f64) -> Result<f64> {
    theta_law.validate()?;
    tail.validate()?;
    if !(precision > 0.0) {
        return Err(Error::param("precision", "must be positive"));
    }
    if !theta_law.is_symmetric() {
        return Err(Error::Unsupported(format!(
            "tail dependence ratio needs a law symmetric about 0.5, got {theta_law:?}"
        )));
    }
    let alpha = tail.alpha;
    let joint = |t: f64| t.min(1.0 - t).max(0.0).powf(alpha);
    let marginal = |t: f64| t.max(0.0).powf(alpha);
    let tol = precision * 1e-3;
    let num = expectation(theta_law, joint, tol);
    let den = expectation(theta_law, marginal, tol);
    if den <= 0.0 {
        return Err(Error::Domain("E[Theta^alpha] vanished".into()));
    }
    Ok((num / den).clamp(0.0, 1.0))
}

/// `E[h(Theta)]`, up to a positive factor shared by every `h` for a given law.
fn expectation(law: &ThetaLaw, h: impl Fn(f64) -> f64, tol: f64) -> f64 {
    match *law {
        ThetaLaw::Constant { c } => h(c),
        ThetaLaw::Bernoulli { p } => p * h(1.0) + (1.0 - p) * h(0.0),
        ThetaLaw::Beta { b1, b2 } => beta_integral(b1, b2, &h, tol),
        ThetaLaw::ScaledBeta { b1, b2, c1, c2 } => {
            beta_integral(b1, b2, |x| h(c1 + (c2 - c1) * x), tol)
        }
    }
}

/// `int_0^1 f(x) x^(b1-1) (1-x)^(b2-1) dx`, split at 1/2. Each half is
/// mapped by `x = s^(1/b1)` (resp. `1 - x = s^(1/b2)`), which absorbs the
/// endpoint singularity of the Beta kernel.
fn beta_integral(b1: f64, b2: f64, f: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let left = |s: f64| {
        let x = s.powf(1.0 / b1);
        f(x) * (1.0 - x).powf(b2 - 1.0) / b1
    };
    let right = |s: f64| {
        let y = s.powf(1.0 / b2);
        f(1.0 - y) * (1.0 - y).powf(b1 - 1.0) / b2
    };
    adaptive_simpson(&left, 0.0, 0.5f64.powf(b1), tol)
        + adaptive_simpson(&right, 0.0, 0.5f64.powf(b2), tol)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Result of the simulation route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloUtd {
    pub lambda: f64,
    pub std_error: f64,
    /// Estimated quantiles of the two weight coordinates at the chosen level.
    pub thresholds: (f64, f64),
    pub draws: usize,
}

/// Quantile level used by the simulation route.
pub const MONTE_CARLO_LEVEL: f64 = 1.0 - 1e-4;

/// Estimates `P(W2 > u2 | W1 > u1)` at `q = 1 - 1e-4` by simulation.
///
/// `draws` values of `Theta` are simulated and `V` is integrated out through
/// the Pareto survival function, so the marginal survival of each weight
/// coordinate is estimated by `mean_i S_V(u / Theta_i)`. The thresholds
/// `u1, u2` solve `survival = 1 - q` for each coordinate by bisection, and
/// the conditional exceedance probability is the ratio of the averaged joint
/// and marginal survivals.
pub fn mrv_true_utd_monte_carlo<R: Rng + ?Sized>(
    theta_law: &ThetaLaw,
    tail: &ParetoTail,
    draws: usize,
    rng: &mut R,
) -> Result<MonteCarloUtd> {
    tail.validate()?;
    let sampler = theta_law.sampler()?;
    if draws < 1000 {
        return Err(Error::param("draws", format!("{draws} draws are too few")));
    }
    // S_V(u / t) = min(1, t^alpha * (k/u)^alpha)
    let alpha = tail.alpha;
    let thetas: Vec<f64> = (0..draws).map(|_| sampler.sample(rng)).collect();
    let first: Vec<f64> = thetas.iter().map(|t| t.powf(alpha)).collect();
    let second: Vec<f64> = thetas.iter().map(|t| (1.0 - t).max(0.0).powf(alpha)).collect();
    drop(thetas);
    let n = draws as f64;
    let target = 1.0 - MONTE_CARLO_LEVEL;
    let threshold = |powers: &[f64]| -> Result<f64> {
        let survival = |u: f64| {
            let c = (tail.k / u).powf(alpha);
            powers.iter().map(|&p| (p * c).min(1.0)).sum::<f64>() / n
        };
        let mut lo = tail.k * 1e-9;
        let mut hi = tail.k * target.powf(-1.0 / alpha) * 2.0;
        if survival(lo) < target {
            return Err(Error::NonConvergence(
                "coordinate is almost surely zero; no upper quantile".into(),
            ));
        }
        for _ in 0..60 {
            let mid = (lo * hi).sqrt();
            if survival(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo * hi).sqrt())
    };
    let u1 = threshold(&first)?;
    let u2 = threshold(&second)?;
    let (c1, c2) = ((tail.k / u1).powf(alpha), (tail.k / u2).powf(alpha));

    let (mut sum_j, mut sum_m) = (0.0, 0.0);
    let mut pairs = Vec::with_capacity(draws);
    for (&a, &b) in first.iter().zip(&second) {
        let marg = (a * c1).min(1.0);
        let joint = marg.min(b * c2);
        sum_j += joint;
        sum_m += marg;
        pairs.push((joint, marg));
    }
    if sum_m <= 0.0 {
        return Err(Error::NonConvergence("no mass above the first threshold".into()));
    }
    let lambda = sum_j / sum_m;
    let resid_var = pairs
        .iter()
        .map(|(j, m)| {
            let r = j - lambda * m;
            r * r
        })
        .sum::<f64>()
        / (n - 1.0);
    let std_error = (resid_var / n).sqrt() / (sum_m / n);
    Ok(MonteCarloUtd {
        lambda,
        std_error,
        thresholds: (u1, u2),
        draws,
    })
}

/// Both routes and their agreement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MrvTruth {
    pub quadrature: f64,
    pub monte_carlo: MonteCarloUtd,
}

/// Runs both routes and fails unless they agree within `precision`.
pub fn verify_mrv_true_utd(
    theta_law: &ThetaLaw,
    tail: &ParetoTail,
    precision: f64,
    draws: usize,
    seed: StreamSeed,
) -> Result<MrvTruth> {
    let quadrature = mrv_true_utd(theta_law, tail, precision)?;
    let monte_carlo = mrv_true_utd_monte_carlo(theta_law, tail, draws, &mut seed.rng())?;
    if 2.0 * monte_carlo.std_error > precision {
        return Err(Error::NonConvergence(format!(
            "standard error {:.2e} too large for precision {precision}",
            monte_carlo.std_error
        )));
    }
    let gap = (quadrature - monte_carlo.lambda).abs();
    if gap > precision {
        return Err(Error::NonConvergence(format!(
            "quadrature {quadrature:.5} and simulation {:.5} differ by {gap:.5}",
            monte_carlo.lambda
        )));
    }
    Ok(MrvTruth {
        quadrature,
        monte_carlo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const STRONG: ThetaLaw = ThetaLaw::ScaledBeta { b1: 0.1, b2: 0.1, c1: 0.4, c2: 0.6 };
    const WEAK: ThetaLaw = ThetaLaw::Beta { b1: 0.5, b2: 0.5 };

    #[test]
    fn gumbel_table_values() {
        assert_eq!(gumbel_true_utd(1.0).unwrap(), 0.0);
        assert!((gumbel_true_utd(1.5).unwrap() - 0.4126).abs() < 5e-5);
        assert!((gumbel_true_utd(2.0).unwrap() - 0.5858).abs() < 5e-5);
        assert!((gumbel_true_utd(10.0).unwrap() - 0.9282).abs() < 5e-5);
        assert!(gumbel_true_utd(0.99).is_err());
    }

    #[test]
    fn gumbel_monotone_and_limits() {
        let mut prev = -1.0;
        for i in 0..=190 {
            let theta = 1.0 + 0.1 * i as f64;
            let v = gumbel_true_utd(theta).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        assert!(gumbel_true_utd(100.0).unwrap() > 0.99);
    }

    #[test]
    fn degenerate_laws() {
        let tail = ParetoTail::default();
        let full = mrv_true_utd(&ThetaLaw::Constant { c: 0.5 }, &tail, 1e-4).unwrap();
        assert_eq!(full, 1.0);
        let indep = mrv_true_utd(&ThetaLaw::Bernoulli { p: 0.5 }, &tail, 1e-4).unwrap();
        assert_eq!(indep, 0.0);
    }

    #[test]
    fn beta_quadrature_against_closed_form_moment() {
        // E[X^a] for Beta(b, b) equals B(b + a, b) / B(b, b); for b = 1 it is 1 / (a + 1).
        let m = beta_integral(1.0, 1.0, |x| x.powf(1.1), 1e-10);
        assert!((m - 1.0 / 2.1).abs() < 1e-8);
        // Arcsine law: E[X] = 1/2, normaliser B(1/2, 1/2) = pi.
        let norm = beta_integral(0.5, 0.5, |_| 1.0, 1e-10);
        assert!((norm - std::f64::consts::PI).abs() < 1e-7, "{norm}");
        let mean = beta_integral(0.5, 0.5, |x| x, 1e-10) / norm;
        assert!((mean - 0.5).abs() < 1e-8);
    }

    #[test]
    fn polar_table_values() {
        let tail = ParetoTail::default();
        let weak = mrv_true_utd(&WEAK, &tail, 1e-4).unwrap();
        let strong = mrv_true_utd(&STRONG, &tail, 1e-4).unwrap();
        assert!((weak - 0.3316).abs() < 0.005, "{weak}");
        assert!((strong - 0.8061).abs() < 0.005, "{strong}");
    }

    #[test]
    fn asymmetric_law_unsupported() {
        let r = mrv_true_utd(&ThetaLaw::Beta { b1: 1.0, b2: 2.0 }, &ParetoTail::default(), 1e-3);
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn routes_agree_on_small_budget() {
        let tail = ParetoTail::default();
        let truth = verify_mrv_true_utd(&WEAK, &tail, 0.005, 2_000_000, StreamSeed::new(5));
        let truth = truth.unwrap();
        assert!((truth.monte_carlo.lambda - truth.quadrature).abs() < 0.005);
    }
}
