//! Latent weight vectors and their dependence scenarios.

mod copula;
mod pareto;
mod theta;
mod truth;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use copula::sample_gumbel_uniforms;
pub use pareto::{pareto_quantile, ParetoTail, UNIFORM_CEILING};
pub use theta::{ThetaLaw, ThetaSampler};
pub use truth::{
    gumbel_true_utd, mrv_true_utd, mrv_true_utd_monte_carlo, verify_mrv_true_utd, MonteCarloUtd,
    MrvTruth, MONTE_CARLO_LEVEL,
};

/// How the components of each weight vector depend on one another.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Dependence {
    /// Gumbel copula uniforms pushed through the Pareto quantile.
    GumbelCopula { theta: f64 },
    /// `(V * Theta, V * (1 - Theta))` with `V` Pareto; two layers only.
    PolarMrv { theta_law: ThetaLaw },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceScenario {
    pub dependence: Dependence,
    #[serde(default)]
    pub marginal: ParetoTail,
    #[serde(default = "default_layers")]
    pub layers: usize,
}

fn default_layers() -> usize {
    2
}

impl DependenceScenario {
    pub fn gumbel(theta: f64) -> Result<Self> {
        let s = DependenceScenario {
            dependence: Dependence::GumbelCopula { theta },
            marginal: ParetoTail::default(),
            layers: 2,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn polar(theta_law: ThetaLaw) -> Result<Self> {
        let s = DependenceScenario {
            dependence: Dependence::PolarMrv { theta_law },
            marginal: ParetoTail::default(),
            layers: 2,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_marginal(mut self, marginal: ParetoTail) -> Result<Self> {
        self.marginal = marginal;
        self.validate()?;
        Ok(self)
    }

    pub fn with_layers(mut self, layers: usize) -> Result<Self> {
        self.layers = layers;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.marginal.validate()?;
        if self.layers < 2 {
            return Err(Error::param("layers", format!("need at least 2, got {}", self.layers)));
        }
        match self.dependence {
            Dependence::GumbelCopula { theta } => {
                if !(theta >= 1.0 && theta.is_finite()) {
                    return Err(Error::param("theta", format!("must be >= 1, got {theta}")));
                }
            }
            Dependence::PolarMrv { theta_law } => {
                theta_law.validate()?;
                if self.layers != 2 {
                    return Err(Error::param(
                        "layers",
                        "the polar construction is defined for two layers only",
                    ));
                }
            }
        }
        Ok(())
    }

    /// True upper tail dependence between the first two layers. Polar
    /// scenarios use the quadrature route at `1e-6`.
    pub fn true_utd(&self) -> Result<f64> {
        match self.dependence {
            Dependence::GumbelCopula { theta } => gumbel_true_utd(theta),
            Dependence::PolarMrv { theta_law } => mrv_true_utd(&theta_law, &self.marginal, 1e-6),
        }
    }
}

/// Non-negative `N x L` weights, stored column (layer) major.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix {
    columns: Vec<Vec<f64>>,
    scenario: Option<DependenceScenario>,
}

impl WeightMatrix {
    /// Builds a matrix from per-layer columns of equal length.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let n = columns.first().map(Vec::len).unwrap_or(0);
        if columns.is_empty() || n == 0 {
            return Err(Error::Shape("weight matrix needs at least one row and column".into()));
        }
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Shape("weight columns differ in length".into()));
        }
        if columns.iter().flatten().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::Domain("weights must be finite and non-negative".into()));
        }
        Ok(WeightMatrix {
            columns,
            scenario: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let layers = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != layers) {
            return Err(Error::Shape("weight rows differ in length".into()));
        }
        let columns = (0..layers).map(|l| rows.iter().map(|r| r[l]).collect()).collect();
        Self::from_columns(columns)
    }

    pub fn nodes(&self) -> usize {
        self.columns[0].len()
    }

    pub fn layers(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, layer: usize) -> &[f64] {
        &self.columns[layer]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn get(&self, node: usize, layer: usize) -> f64 {
        self.columns[layer][node]
    }

    pub fn row(&self, node: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[node]).collect()
    }

    /// Total connectivity potential of a layer.
    pub fn total(&self, layer: usize) -> f64 {
        self.columns[layer].iter().sum()
    }

    pub fn scenario(&self) -> Option<&DependenceScenario> {
        self.scenario.as_ref()
    }
}

/// Draws `n` i.i.d. weight vectors under `scenario`.
pub fn sample_weights<R: Rng + ?Sized>(
    scenario: &DependenceScenario,
    n: usize,
    rng: &mut R,
) -> Result<WeightMatrix> {
    scenario.validate()?;
    if n == 0 {
        return Err(Error::param("n", "need at least one node"));
    }
    let tail = scenario.marginal;
    let columns = match scenario.dependence {
        Dependence::GumbelCopula { theta } => {
            let mut cols = sample_gumbel_uniforms(n, scenario.layers, theta, rng)?;
            for col in cols.iter_mut() {
                for u in col.iter_mut() {
                    *u = tail.quantile_clamped(*u);
                }
            }
            cols
        }
        Dependence::PolarMrv { theta_law } => {
            let sampler = theta_law.sampler()?;
            let mut first = Vec::with_capacity(n);
            let mut second = Vec::with_capacity(n);
            for _ in 0..n {
                let v = tail.quantile_clamped(rng.random::<f64>());
                let t = sampler.sample(rng);
                first.push(v * t);
                second.push(v * (1.0 - t));
            }
            vec![first, second]
        }
    };
    Ok(WeightMatrix {
        columns,
        scenario: Some(*scenario),
    })
}

/// CSV with header `node,layer_1,...,layer_L`, nodes 0-based.
pub fn write_weights_csv<W: std::io::Write>(weights: &WeightMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["node".to_string()];
    header.extend((1..=weights.layers()).map(|l| format!("layer_{l}")));
    w.write_record(&header)?;
    for i in 0..weights.nodes() {
        let mut row = vec![i.to_string()];
        row.extend((0..weights.layers()).map(|l| weights.get(i, l).to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn fmt_law(law: &ThetaLaw, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match law {
        ThetaLaw::Constant { c } => write!(f, "constant={c}"),
        ThetaLaw::ScaledBeta { b1, b2, c1, c2 } => write!(f, "scaled-beta={b1}:{b2}:{c1}:{c2}"),
        ThetaLaw::Beta { b1, b2 } => write!(f, "beta={b1}:{b2}"),
        ThetaLaw::Bernoulli { p } => write!(f, "bernoulli={p}"),
    }
}

/// Short form: `gumbel:theta=2`, `polar:constant=0.5`, `polar:beta=0.5:0.5`,
/// `polar:scaled-beta=0.1:0.1:0.4:0.6`, `polar:bernoulli=0.5`, optionally
/// followed by `,alpha=..`, `,k=..`, `,layers=..`.
impl fmt::Display for DependenceScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.dependence {
            Dependence::GumbelCopula { theta } => write!(f, "gumbel:theta={theta}")?,
            Dependence::PolarMrv { theta_law } => {
                f.write_str("polar:")?;
                fmt_law(theta_law, f)?;
            }
        }
        let default = ParetoTail::default();
        if self.marginal.alpha != default.alpha {
            write!(f, ",alpha={}", self.marginal.alpha)?;
        }
        if self.marginal.k != default.k {
            write!(f, ",k={}", self.marginal.k)?;
        }
        if self.layers != 2 {
            write!(f, ",layers={}", self.layers)?;
        }
        Ok(())
    }
}

impl FromStr for DependenceScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse(format!("scenario `{s}`: {msg}"));
        let (kind, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| bad("expected `gumbel:...` or `polar:...`".into()))?;
        let num = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("`{v}` is not a number")))
        };
        let nums = |v: &str, want: usize| -> Result<Vec<f64>> {
            let out = v.split(':').map(num).collect::<Result<Vec<_>>>()?;
            if out.len() != want {
                return Err(bad(format!("expected {want} `:`-separated values, got `{v}`")));
            }
            Ok(out)
        };

        let mut dependence = None;
        let mut marginal = ParetoTail::default();
        let mut layers = 2;
        for item in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{item}`")))?;
            match (kind.trim(), key.trim()) {
                (_, "alpha") => marginal.alpha = num(value)?,
                (_, "k") => marginal.k = num(value)?,
                (_, "layers") => {
                    layers = value
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("bad layer count `{value}`")))?
                }
                ("gumbel", "theta") => {
                    dependence = Some(Dependence::GumbelCopula { theta: num(value)? })
                }
                ("polar", law) => {
                    let theta_law = match law {
                        "constant" => ThetaLaw::Constant { c: num(value)? },
                        "bernoulli" => ThetaLaw::Bernoulli { p: num(value)? },
                        "beta" => {
                            let v = nums(value, 2)?;
                            ThetaLaw::Beta { b1: v[0], b2: v[1] }
                        }
                        "scaled-beta" => {
                            let v = nums(value, 4)?;
                            ThetaLaw::ScaledBeta {
                                b1: v[0],
                                b2: v[1],
                                c1: v[2],
                                c2: v[3],
                            }
                        }
                        other => return Err(bad(format!("unknown theta law `{other}`"))),
                    };
                    dependence = Some(Dependence::PolarMrv { theta_law });
                }
                (k, key) => return Err(bad(format!("unknown key `{key}` for `{k}`"))),
            }
        }
        let dependence = dependence.ok_or_else(|| bad("missing dependence parameter".into()))?;
        let scenario = DependenceScenario {
            dependence,
            marginal,
            layers,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}
