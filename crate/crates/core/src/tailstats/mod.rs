//! Empirical upper tail dependence and supporting statistics.

mod hill;
mod summary;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hill::{hill_plot, hill_tail_index, default_hill_k};
pub use summary::{pearson_correlation, replication_summary, ReplicationSummary};

/// How many top order statistics define the tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdSpec {
    TopCount(usize),
    /// Converted to `round(N * (1 - q))`, halves rounded up.
    QuantileLevel(f64),
}

impl Default for ThresholdSpec {
    fn default() -> Self {
        ThresholdSpec::TopCount(100)
    }
}

impl ThresholdSpec {
    /// Effective `t_N` for a sample of size `n`; must satisfy `1 <= t_N < n`.
    pub fn top_count(&self, n: usize) -> Result<usize> {
        let t = match *self {
            ThresholdSpec::TopCount(t) => t,
            ThresholdSpec::QuantileLevel(q) => {
                if !(q > 0.0 && q < 1.0) {
                    return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {q}")));
                }
                (n as f64 * (1.0 - q) + 0.5).floor() as usize
            }
        };
        if t == 0 || t >= n {
            return Err(Error::Domain(format!("top count {t} needs 1 <= t < {n}")));
        }
        Ok(t)
    }
}

/// Result of [`utd_estimate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtdEstimate {
    pub lambda_hat: f64,
    pub t_n: usize,
    pub threshold_1: f64,
    pub threshold_2: f64,
    /// Nodes whose first coordinate exceeds its threshold.
    pub marginal_exceedances: usize,
    /// Nodes exceeding both thresholds.
    pub joint_exceedances: usize,
    /// Set when no node exceeds the first threshold; `lambda_hat` is then 0.
    pub degenerate: bool,
}

fn ensure_comparable<T: PartialOrd>(sample: &[T]) -> Result<()> {
    if sample.iter().any(|x| x.partial_cmp(x).is_none()) {
        return Err(Error::Domain("sample contains unordered values (NaN)".into()));
    }
    Ok(())
}

fn order<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// `G^-1(1 - t_n / N)` for the empirical CDF `G`, i.e. the `(N - t_n)`-th
/// smallest value. Exceedances are counted with `>`, so ties at the
/// threshold leave fewer than `t_n` exceedances.
pub fn empirical_threshold<T: Copy + PartialOrd>(sample: &[T], t_n: usize) -> Result<T> {
    let n = sample.len();
    if t_n == 0 || t_n >= n {
        return Err(Error::Domain(format!("top count {t_n} needs 1 <= t < {n}")));
    }
    ensure_comparable(sample)?;
    let mut scratch = sample.to_vec();
    let (_, nth, _) = scratch.select_nth_unstable_by(n - t_n - 1, order);
    Ok(*nth)
}

/// Share of nodes above the first threshold that are also above the second.
pub fn utd_estimate<T>(sample_1: &[T], sample_2: &[T], spec: ThresholdSpec) -> Result<UtdEstimate>
where
    T: Copy + PartialOrd + Into<f64>,
{
    if sample_1.len() != sample_2.len() {
        return Err(Error::Shape(format!(
            "paired samples differ in length ({} vs {})",
            sample_1.len(),
            sample_2.len()
        )));
    }
    let n = sample_1.len();
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 paired values, got {n}")));
    }
    let t_n = spec.top_count(n)?;
    let u1 = empirical_threshold(sample_1, t_n)?;
    let u2 = empirical_threshold(sample_2, t_n)?;
    let (mut marginal, mut joint) = (0usize, 0usize);
    for (a, b) in sample_1.iter().zip(sample_2) {
        if *a > u1 {
            marginal += 1;
            if *b > u2 {
                joint += 1;
            }
        }
    }
    let degenerate = marginal == 0;
    Ok(UtdEstimate {
        lambda_hat: if degenerate { 0.0 } else { joint as f64 / marginal as f64 },
        t_n,
        threshold_1: u1.into(),
        threshold_2: u2.into(),
        marginal_exceedances: marginal,
        joint_exceedances: joint,
        degenerate,
    })
}

/// Integer samples such as degrees.
pub fn utd_estimate_counts(sample_1: &[u64], sample_2: &[u64], spec: ThresholdSpec) -> Result<UtdEstimate> {
    let a: Vec<Count> = sample_1.iter().map(|&x| Count(x)).collect();
    let b: Vec<Count> = sample_2.iter().map(|&x| Count(x)).collect();
    utd_estimate(&a, &b, spec)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Count(u64);

impl From<Count> for f64 {
    fn from(c: Count) -> f64 {
        c.0 as f64
    }
}
