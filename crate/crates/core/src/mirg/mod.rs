//! Multilayer inhomogeneous random graphs.
//!
//! Given weights `W` (N nodes by L layers), every unordered pair `{i, j}`
//! (self-pairs included) in layer `l` receives an independent
//! `Poisson(g_l(W_il * W_jl / T_l))` number of edges, `T_l` being the layer
//! total. Two backends build such graphs: [`build_pairwise`] visits every
//! pair and accepts any connection function; [`build_fast_identity`] handles
//! the identity function by thinning a Poisson stream of weighted pairs.

mod alias;
mod fast;
mod io;
mod pairwise;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::StreamSeed;
use crate::weights::WeightMatrix;

pub use alias::AliasTable;
pub use fast::{build_fast_identity, fast_identity_degrees};
pub use io::{write_degrees_csv, write_layer_edges};
pub use pairwise::build_pairwise;

/// Per-layer map from `W_i * W_j / T` to a Poisson mean.
#[derive(Clone)]
pub enum ConnectionFunction {
    Identity,
    Custom {
        name: String,
        map: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl ConnectionFunction {
    pub fn custom(name: impl Into<String>, map: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ConnectionFunction::Custom {
            name: name.into(),
            map: Arc::new(map),
        }
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            ConnectionFunction::Identity => x,
            ConnectionFunction::Custom { map, .. } => map(x),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, ConnectionFunction::Identity)
    }

    pub(crate) fn check(&self) -> Result<()> {
        let at_zero = self.apply(0.0);
        if at_zero != 0.0 {
            return Err(Error::param("g", format!("connection function must map 0 to 0, got {at_zero}")));
        }
        Ok(())
    }
}

impl fmt::Debug for ConnectionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectionFunction::Identity => f.write_str("Identity"),
            ConnectionFunction::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// Edge copies between `i <= j` in one layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub i: u32,
    pub j: u32,
    pub multiplicity: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Pairwise,
    FastIdentity,
}

/// A sampled multigraph; each layer's edges are sorted by `(i, j)` with
/// `i <= j` and positive multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilayerGraph {
    nodes: usize,
    layers: Vec<Vec<Edge>>,
    backend: BackendKind,
}

impl MultilayerGraph {
    pub fn from_layers(nodes: usize, layers: Vec<Vec<Edge>>, backend: BackendKind) -> Result<Self> {
        for layer in &layers {
            for e in layer {
                if e.i > e.j || e.j as usize >= nodes {
                    return Err(Error::Shape(format!(
                        "edge ({}, {}) invalid for {nodes} nodes",
                        e.i, e.j
                    )));
                }
            }
        }
        let layers = layers
            .into_iter()
            .map(|mut l| {
                l.retain(|e| e.multiplicity > 0);
                l.sort_unstable();
                l
            })
            .collect();
        Ok(MultilayerGraph {
            nodes,
            layers,
            backend,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, l: usize) -> &[Edge] {
        &self.layers[l]
    }

    pub fn backend(&self) -> BackendKind {
        self.backend
    }

    /// Total multiplicity of self-loops in layer `l`.
    pub fn self_loops(&self, l: usize) -> u64 {
        self.layers[l]
            .iter()
            .filter(|e| e.i == e.j)
            .map(|e| e.multiplicity as u64)
            .sum()
    }

    /// Total multiplicity of non-loop edges in layer `l`.
    pub fn link_copies(&self, l: usize) -> u64 {
        self.layers[l]
            .iter()
            .filter(|e| e.i != e.j)
            .map(|e| e.multiplicity as u64)
            .sum()
    }
}

/// `N x L` degree matrix, column major. A self-loop adds its multiplicity
/// once to its node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilayerDegrees {
    columns: Vec<Vec<u64>>,
    backend: BackendKind,
}

impl MultilayerDegrees {
    pub(crate) fn new(columns: Vec<Vec<u64>>, backend: BackendKind) -> Self {
        MultilayerDegrees { columns, backend }
    }

    pub fn nodes(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn layers(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, layer: usize) -> &[u64] {
        &self.columns[layer]
    }

    pub fn get(&self, node: usize, layer: usize) -> u64 {
        self.columns[layer][node]
    }

    pub fn backend(&self) -> BackendKind {
        self.backend
    }
}

pub fn degrees(graph: &MultilayerGraph) -> MultilayerDegrees {
    let columns = graph
        .layers
        .iter()
        .map(|edges| {
            let mut d = vec![0u64; graph.nodes];
            for e in edges {
                let m = e.multiplicity as u64;
                d[e.i as usize] += m;
                if e.i != e.j {
                    d[e.j as usize] += m;
                }
            }
            d
        })
        .collect();
    MultilayerDegrees::new(columns, graph.backend)
}

/// Node count up to which [`Backend::Auto`] picks the pairwise builder.
pub const AUTO_PAIRWISE_MAX_NODES: usize = 2000;

/// Backend selector for identity-connection simulations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Auto,
    Pairwise,
    Fast,
}

impl Backend {
    pub fn resolve(self, nodes: usize) -> BackendKind {
        match self {
            Backend::Pairwise => BackendKind::Pairwise,
            Backend::Fast => BackendKind::FastIdentity,
            Backend::Auto if nodes <= AUTO_PAIRWISE_MAX_NODES => BackendKind::Pairwise,
            Backend::Auto => BackendKind::FastIdentity,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Auto => "auto",
            Backend::Pairwise => "pairwise",
            Backend::Fast => "fast",
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Backend::Auto),
            "pairwise" => Ok(Backend::Pairwise),
            "fast" => Ok(Backend::Fast),
            other => Err(Error::Parse(format!("unknown backend `{other}`"))),
        }
    }
}

/// Builds an identity-connection graph with the chosen backend.
pub fn build_graph(weights: &WeightMatrix, backend: Backend, seed: StreamSeed) -> Result<MultilayerGraph> {
    match backend.resolve(weights.nodes()) {
        BackendKind::Pairwise => {
            let g = vec![ConnectionFunction::Identity; weights.layers()];
            build_pairwise(weights, &g, seed)
        }
        BackendKind::FastIdentity => build_fast_identity(weights, seed),
    }
}

/// Builds a graph with arbitrary per-layer connection functions. Only the
/// pairwise backend accepts non-identity functions.
pub fn build_graph_with(
    weights: &WeightMatrix,
    g: &[ConnectionFunction],
    backend: Backend,
    seed: StreamSeed,
) -> Result<MultilayerGraph> {
    match backend.resolve(weights.nodes()) {
        BackendKind::Pairwise => build_pairwise(weights, g, seed),
        BackendKind::FastIdentity => {
            if let Some(f) = g.iter().find(|f| !f.is_identity()) {
                return Err(Error::UnsupportedBackend(format!(
                    "the fast backend needs identity connection functions, got {f:?}"
                )));
            }
            build_fast_identity(weights, seed)
        }
    }
}

/// Degrees of an identity-connection graph. The fast backend accumulates
/// degrees straight from its edge stream; the result equals
/// `degrees(&build_graph(..))` for the same seed.
pub fn sample_degrees(weights: &WeightMatrix, backend: Backend, seed: StreamSeed) -> Result<MultilayerDegrees> {
    match backend.resolve(weights.nodes()) {
        BackendKind::Pairwise => Ok(degrees(&build_graph(weights, Backend::Pairwise, seed)?)),
        BackendKind::FastIdentity => fast_identity_degrees(weights, seed),
    }
}

pub(crate) fn layer_totals(weights: &WeightMatrix) -> Result<Vec<f64>> {
    (0..weights.layers())
        .map(|l| {
            let t = weights.total(l);
            if t > 0.0 {
                Ok(t)
            } else {
                Err(Error::DegenerateLayer { layer: l })
            }
        })
        .collect()
}
