//! Run configurations. Each subcommand resolves its settings from built-in
//! defaults, then an optional TOML file, then command-line flags, and
//! records the result as `config.toml` next to its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mirg_utd::ThresholdSpec;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub const CONFIG_FILE: &str = "config.toml";

/// Scenarios of the desk-scale reproduction grid: four Gumbel copulas and
/// four polar constructions from full dependence to independence.
pub const DEFAULT_SCENARIOS: [&str; 8] = [
    "gumbel:theta=1",
    "gumbel:theta=1.5",
    "gumbel:theta=2",
    "gumbel:theta=10",
    "polar:constant=0.5",
    "polar:scaled-beta=0.1:0.1:0.4:0.6",
    "polar:beta=0.5:0.5",
    "polar:bernoulli=0.5",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub scenario: String,
    pub nodes: usize,
    pub backend: String,
    pub seed: Option<u64>,
    /// Also write one edge list per layer.
    pub edges: bool,
    pub out: PathBuf,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            scenario: "gumbel:theta=2".into(),
            nodes: 1000,
            backend: "auto".into(),
            seed: None,
            edges: false,
            out: "simulate-out".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReplicateConfig {
    pub scenarios: Vec<String>,
    pub sizes: Vec<usize>,
    pub threshold: String,
    pub replications: usize,
    pub backend: String,
    pub seed: Option<u64>,
    pub out: PathBuf,
}

impl Default for ReplicateConfig {
    fn default() -> Self {
        ReplicateConfig {
            scenarios: DEFAULT_SCENARIOS.iter().map(|s| s.to_string()).collect(),
            sizes: vec![1000, 5000, 10000, 20000],
            threshold: "top=100".into(),
            replications: 200,
            backend: "auto".into(),
            seed: None,
            out: "replicate-out".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeConfig {
    /// Edge-list files in period order; labels are the file stems.
    pub periods: Vec<PathBuf>,
    pub prices: Option<PathBuf>,
    pub threshold: String,
    pub alignment: String,
    pub delimiter: String,
    pub hill_k: Option<usize>,
    pub out: PathBuf,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            periods: Vec::new(),
            prices: None,
            threshold: "top=100".into(),
            alignment: "second".into(),
            delimiter: "auto".into(),
            hill_k: None,
            out: "analyze-out".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateConfig {
    /// CSV or whitespace-separated file; the first two columns are used.
    pub input: PathBuf,
    pub threshold: String,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            input: PathBuf::new(),
            threshold: "top=100".into(),
        }
    }
}

/// Layers defaults, an optional config file and flags, later sources
/// winning key by key.
pub fn resolve<T, F>(file: Option<&Path>, flags: &F) -> Result<T>
where
    T: Default + Serialize + DeserializeOwned,
    F: Serialize,
{
    let mut table = toml::Table::try_from(T::default()).context("encoding defaults")?;
    if let Some(path) = file {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let from_file: toml::Table =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        table.extend(from_file);
    }
    table.extend(toml::Table::try_from(flags).context("encoding flags")?);
    let resolved = toml::Value::Table(table);
    match file {
        Some(path) => T::deserialize(resolved).with_context(|| format!("invalid config {}", path.display())),
        None => T::deserialize(resolved).context("invalid settings"),
    }
}

pub fn write_config<T: Serialize>(config: &T, dir: &Path) -> Result<()> {
    let text = toml::to_string(config).context("encoding resolved config")?;
    fs::write(dir.join(CONFIG_FILE), text).with_context(|| format!("writing config to {}", dir.display()))
}

/// `top=<count>` or `q=<level>`.
pub fn parse_threshold(text: &str) -> Result<ThresholdSpec> {
    let (key, value) = text
        .split_once('=')
        .with_context(|| format!("threshold `{text}` must look like `top=100` or `q=0.995`"))?;
    match key.trim() {
        "top" => Ok(ThresholdSpec::TopCount(
            value.trim().parse().with_context(|| format!("bad top count in `{text}`"))?,
        )),
        "q" => {
            let q: f64 = value.trim().parse().with_context(|| format!("bad level in `{text}`"))?;
            if !(q > 0.0 && q < 1.0) {
                bail!("quantile level in `{text}` must lie in (0, 1)");
            }
            Ok(ThresholdSpec::QuantileLevel(q))
        }
        other => bail!("unknown threshold kind `{other}`; use `top` or `q`"),
    }
}

/// Seeds are kept below 2^63 so they survive a TOML round trip.
pub fn entropy_seed() -> u64 {
    rand::random::<u64>() >> 1
}
