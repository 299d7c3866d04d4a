use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::{layer_totals, BackendKind, ConnectionFunction, Edge, MultilayerGraph};
use crate::error::{Error, Result};
use crate::rng::{SimRng, StreamSeed};
use crate::weights::WeightMatrix;

/// Rows per independently seeded work unit.
const ROW_BLOCK: usize = 32;

pub(crate) fn poisson(mean: f64, rng: &mut SimRng) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean)
        .map_err(|e| Error::Domain(format!("poisson mean {mean}: {e}")))?;
    Ok(dist.sample(rng) as u64)
}

/// Draws every pair multiplicity independently, `O(N^2 L)`.
///
/// Layer `l`, row block `b` draws from `seed.child(l).child(b)`, so the
/// result does not depend on the rayon thread count.
pub fn build_pairwise(
    weights: &WeightMatrix,
    g: &[ConnectionFunction],
    seed: StreamSeed,
) -> Result<MultilayerGraph> {
    if g.len() != weights.layers() {
        return Err(Error::Shape(format!(
            "{} connection functions for {} layers",
            g.len(),
            weights.layers()
        )));
    }
    for f in g {
        f.check()?;
    }
    let totals = layer_totals(weights)?;
    let n = weights.nodes();
    let blocks = n.div_ceil(ROW_BLOCK);
    let layers = (0..weights.layers())
        .into_par_iter()
        .map(|l| {
            let w = weights.column(l);
            let total = totals[l];
            let layer_seed = seed.child(l as u64);
            let parts = (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let mut rng = layer_seed.child(b as u64).rng();
                    let mut out = Vec::new();
                    for i in b * ROW_BLOCK..((b + 1) * ROW_BLOCK).min(n) {
                        if w[i] == 0.0 {
                            continue;
                        }
                        for j in i..n {
                            let mean = g[l].apply(w[i] * w[j] / total);
                            if !(mean >= 0.0 && mean.is_finite()) {
                                return Err(Error::Domain(format!(
                                    "connection function gave mean {mean} for pair ({i}, {j})"
                                )));
                            }
                            let m = poisson(mean, &mut rng)?;
                            if m > 0 {
                                out.push(Edge {
                                    i: i as u32,
                                    j: j as u32,
                                    multiplicity: m as u32,
                                });
                            }
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(parts.concat())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultilayerGraph {
        nodes: n,
        layers,
        backend: BackendKind::Pairwise,
    })
}
