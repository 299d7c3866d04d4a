//! Walker/Vose alias table for O(1) sampling of node indices.

use rand::RngCore;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct AliasTable {
    /// Acceptance threshold of each bucket, scaled to `u64`.
    cutoff: Vec<u64>,
    alias: Vec<u32>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        if n == 0 || n > u32::MAX as usize {
            return Err(Error::Shape(format!("alias table over {n} entries")));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Domain("alias weights must have a positive finite sum".into()));
        }
        let scale = n as f64 / total;
        let mut prob: Vec<f64> = weights.iter().map(|w| w * scale).collect();
        let mut alias: Vec<u32> = (0..n as u32).collect();
        let mut small = Vec::new();
        let mut large = Vec::new();
        for (i, p) in prob.iter().enumerate() {
            if *p < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s] = l as u32;
            prob[l] -= 1.0 - prob[s];
            if prob[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers are numerically one.
        for i in small.into_iter().chain(large) {
            prob[i] = 1.0;
        }
        let cutoff = prob
            .iter()
            .map(|p| {
                if *p >= 1.0 {
                    u64::MAX
                } else {
                    (p * 18_446_744_073_709_551_616.0) as u64
                }
            })
            .collect();
        Ok(AliasTable { cutoff, alias })
    }

    pub fn len(&self) -> usize {
        self.alias.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alias.is_empty()
    }

    /// One 64-bit draw: the high part of `r * n` picks the bucket, the low
    /// part decides between the bucket and its alias.
    #[inline]
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> u32 {
        let r = rng.next_u64();
        let wide = r as u128 * self.alias.len() as u128;
        let bucket = (wide >> 64) as usize;
        let frac = wide as u64;
        if frac < self.cutoff[bucket] {
            bucket as u32
        } else {
            self.alias[bucket]
        }
    }
}
