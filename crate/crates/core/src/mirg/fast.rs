use rand::Rng;

use super::pairwise::poisson;
use super::{layer_totals, AliasTable, BackendKind, Edge, MultilayerDegrees, MultilayerGraph};
use crate::error::Result;
use crate::rng::SimRng;
use crate::rng::StreamSeed;
use crate::weights::WeightMatrix;

/// Streams the edge copies of one identity-connection layer.
///
/// `K ~ Poisson(T)` ordered pairs are drawn with both endpoints i.i.d.
/// proportional to the weights. Ordered pairs `(i, j)` then occur at rate
/// `W_i W_j / T`; keeping each off-diagonal pair with probability 1/2 leaves
/// rate `W_i W_j / T` on every unordered pair `{i, j}` and `W_i^2 / T` on
/// each self-pair, which is the pairwise Poisson model.
fn stream_layer(
    column: &[f64],
    total: f64,
    rng: &mut SimRng,
    mut visit: impl FnMut(u32, u32),
) -> Result<()> {
    let table = AliasTable::new(column)?;
    let events = poisson(total, rng)?;
    for _ in 0..events {
        let a = table.sample(rng);
        let b = table.sample(rng);
        if a == b {
            visit(a, a);
        } else if rng.random::<bool>() {
            visit(a.min(b), a.max(b));
        }
    }
    Ok(())
}

/// Fast identity-connection builder. Layer `l` draws from `seed.child(l)`.
pub fn build_fast_identity(weights: &WeightMatrix, seed: StreamSeed) -> Result<MultilayerGraph> {
    let totals = layer_totals(weights)?;
    let mut layers = Vec::with_capacity(weights.layers());
    for (l, total) in totals.iter().enumerate() {
        let mut rng = seed.child(l as u64).rng();
        let mut keys: Vec<u64> = Vec::with_capacity(*total as usize + 16);
        stream_layer(weights.column(l), *total, &mut rng, |i, j| {
            keys.push(((i as u64) << 32) | j as u64);
        })?;
        keys.sort_unstable();
        let mut edges: Vec<Edge> = Vec::new();
        for key in keys {
            let (i, j) = ((key >> 32) as u32, key as u32);
            match edges.last_mut() {
                Some(e) if e.i == i && e.j == j => e.multiplicity += 1,
                _ => edges.push(Edge { i, j, multiplicity: 1 }),
            }
        }
        layers.push(edges);
    }
    Ok(MultilayerGraph {
        nodes: weights.nodes(),
        layers,
        backend: BackendKind::FastIdentity,
    })
}

/// Degrees of [`build_fast_identity`]'s graph for the same seed, without
/// storing edges.
pub fn fast_identity_degrees(weights: &WeightMatrix, seed: StreamSeed) -> Result<MultilayerDegrees> {
    let totals = layer_totals(weights)?;
    let mut columns = Vec::with_capacity(weights.layers());
    for (l, total) in totals.iter().enumerate() {
        let mut rng = seed.child(l as u64).rng();
        let mut d = vec![0u64; weights.nodes()];
        stream_layer(weights.column(l), *total, &mut rng, |i, j| {
            d[i as usize] += 1;
            if i != j {
                d[j as usize] += 1;
            }
        })?;
        columns.push(d);
    }
    Ok(MultilayerDegrees::new(columns, BackendKind::FastIdentity))
}
