#![allow(dead_code)]

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sample chi-square homogeneity test on count histograms keyed by bin.
/// Adjacent bins (in key order) are merged until each merged bin holds at
/// least `min_count` pooled observations. Returns `(statistic, df, p_value)`.
pub fn chi_square_two_sample<K: Ord + Clone>(
    a: &BTreeMap<K, u64>,
    b: &BTreeMap<K, u64>,
    min_count: u64,
) -> (f64, usize, f64) {
    let mut keys: Vec<K> = a.keys().chain(b.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    let mut merged: Vec<(u64, u64)> = Vec::new();
    let mut cur = (0u64, 0u64);
    for k in keys {
        cur.0 += a.get(&k).copied().unwrap_or(0);
        cur.1 += b.get(&k).copied().unwrap_or(0);
        if cur.0 + cur.1 >= min_count {
            merged.push(cur);
            cur = (0, 0);
        }
    }
    if cur.0 + cur.1 > 0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += cur.0;
                last.1 += cur.1;
            }
            None => merged.push(cur),
        }
    }
    let na: f64 = merged.iter().map(|m| m.0 as f64).sum();
    let nb: f64 = merged.iter().map(|m| m.1 as f64).sum();
    let (ra, rb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let stat: f64 = merged
        .iter()
        .map(|&(x, y)| {
            let d = x as f64 * ra - y as f64 * rb;
            d * d / (x + y) as f64
        })
        .sum();
    let df = merged.len().saturating_sub(1).max(1);
    let p = 1.0 - ChiSquared::new(df as f64).unwrap().cdf(stat);
    (stat, df, p)
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}
