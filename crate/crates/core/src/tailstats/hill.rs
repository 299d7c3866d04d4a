use crate::error::{Error, Result};

/// `ceil(0.05 * n)`, kept within `1..n`.
pub fn default_hill_k(n: usize) -> usize {
    ((0.05 * n as f64).ceil() as usize).clamp(1, n.saturating_sub(1).max(1))
}

fn sorted_desc(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain("sample contains NaN".into()));
    }
    let mut s = sample.to_vec();
    s.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(s)
}

fn hill_sorted(desc: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k >= desc.len() {
        return Err(Error::Domain(format!(
            "hill estimator needs 1 <= k < n, got k={k}, n={}",
            desc.len()
        )));
    }
    let base = desc[k];
    if !(base > 0.0) {
        return Err(Error::Domain(format!(
            "the top {} values must be positive, found {base}",
            k + 1
        )));
    }
    let mean_log = desc[..k].iter().map(|x| (x / base).ln()).sum::<f64>() / k as f64;
    if mean_log <= 0.0 {
        return Err(Error::Domain("top order statistics are all tied".into()));
    }
    Ok(1.0 / mean_log)
}

/// Hill estimate of the tail index from the `k` largest values relative to
/// the `(k+1)`-th largest.
pub fn hill_tail_index(sample: &[f64], k: usize) -> Result<f64> {
    hill_sorted(&sorted_desc(sample)?, k)
}

/// `(k, alpha_hat)` for each `k` in `ks`; values of `k` where the estimate is
/// undefined are skipped.
pub fn hill_plot(sample: &[f64], ks: impl IntoIterator<Item = usize>) -> Result<Vec<(usize, f64)>> {
    let desc = sorted_desc(sample)?;
    Ok(ks
        .into_iter()
        .filter_map(|k| hill_sorted(&desc, k).ok().map(|a| (k, a)))
        .collect())
}
