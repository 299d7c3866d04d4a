use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample Pearson correlation.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("lengths {} and {} differ", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("need at least two points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    pub mean: f64,
    /// Mean of `(estimate - truth)^2`.
    pub mse: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// `t_n * variance`.
    pub scaled_variance: f64,
    pub count: usize,
}

/// Mean, MSE against `truth`, and `t_n`-scaled sample variance. With a
/// single estimate the variance is NaN.
pub fn replication_summary(estimates: &[f64], truth: f64, t_n: usize) -> Result<ReplicationSummary> {
    if estimates.is_empty() {
        return Err(Error::EmptyInput("no estimates to summarise".into()));
    }
    let n = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / n;
    let mse = estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / n;
    let variance = if estimates.len() > 1 {
        estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        f64::NAN
    };
    Ok(ReplicationSummary {
        mean,
        mse,
        variance,
        scaled_variance: t_n as f64 * variance,
        count: estimates.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson_correlation(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_correlation(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        let r = pearson_correlation(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson_correlation(&[1.0, 1.0], &[2.0, 3.0]),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(pearson_correlation(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn summary_examples() {
        let s = replication_summary(&[0.3, 0.3, 0.3], 0.3, 100).unwrap();
        assert_eq!((s.mse, s.scaled_variance), (0.0, 0.0));
        let s = replication_summary(&[0.0, 1.0], 0.5, 100).unwrap();
        assert_eq!((s.mean, s.mse, s.scaled_variance), (0.5, 0.25, 50.0));
        let s = replication_summary(&[0.4, 0.6], 0.5, 1).unwrap();
        assert!((s.mse - 0.01).abs() < 1e-15);
        assert!(replication_summary(&[], 0.0, 1).is_err());
        assert!(replication_summary(&[0.2], 0.0, 1).unwrap().variance.is_nan());
    }

    proptest! {
        #[test]
        fn pearson_affine_invariant(
            pts in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40),
            a in 0.1f64..10.0, b in -50.0f64..50.0,
        ) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
            if let Ok(r) = pearson_correlation(&x, &y) {
                let xt: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                let r2 = pearson_correlation(&xt, &y).unwrap();
                prop_assert!((r - r2).abs() < 1e-12);
            }
        }

        #[test]
        fn mse_decomposes(est in prop::collection::vec(0.0f64..1.0, 2..50), truth in 0.0f64..1.0) {
            let s = replication_summary(&est, truth, 1).unwrap();
            let n = est.len() as f64;
            let biased_var = s.variance * (n - 1.0) / n;
            prop_assert!((s.mse - (biased_var + (s.mean - truth).powi(2))).abs() < 1e-10);
        }
    }
}
