//! Command-line front end for the `mirg-utd` simulation and estimation
//! library.

pub mod commands;
pub mod config;

use std::path::PathBuf;
use std::thread;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use commands::{
    cmd_analyze, cmd_estimate, cmd_replicate, cmd_simulate, cmd_truth, AnalyzeOutcome,
    CorrelationSummary, TruthRow,
};
pub use config::{resolve, AnalyzeConfig, EstimateConfig, ReplicateConfig, SimulateConfig};

#[derive(Debug, Parser)]
#[command(name = "mirg-utd", version, about = "Tail dependence of degrees in multilayer inhomogeneous random graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one multilayer network and write weights and degrees.
    Simulate(SimulateArgs),
    /// Estimate tail dependence between two columns of a file.
    Estimate(EstimateArgs),
    /// Run seeded Monte Carlo replications over a scenario grid.
    Replicate(ReplicateArgs),
    /// Estimate tail dependence across consecutive periods of edge lists.
    Analyze(AnalyzeArgs),
    /// Print limiting tail dependence values.
    Truth(TruthArgs),
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// TOML config; flags override its keys.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// e.g. `gumbel:theta=2` or `polar:beta=0.5:0.5`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    /// Number of nodes.
    #[arg(long = "n", visible_alias = "nodes")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    /// `auto`, `pairwise` or `fast`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Also write per-layer edge lists.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub edges: bool,
    /// Output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Two-column CSV or whitespace-separated file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// `top=<count>` or `q=<level>`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplicateArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Repeat for several scenarios.
    #[arg(long = "scenario")]
    #[serde(rename = "scenarios", skip_serializing_if = "Option::is_none")]
    pub scenarios: Option<Vec<String>>,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    /// `top=<count>` or `q=<level>`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the number of CPUs. Results do not
    /// depend on it.
    #[arg(long)]
    #[serde(skip)]
    pub workers: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Edge-list files in period order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub periods: Vec<PathBuf>,
    /// CSV with header `period,initial_price,final_price`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prices: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    /// Period of a pair whose shrinkage ratio is used: `first` or `second`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alignment: Option<String>,
    /// `auto`, `whitespace` or `comma`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delimiter: Option<String>,
    /// Order statistics for the Hill estimator; default 5% of the nodes.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hill_k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TruthArgs {
    /// Repeat for several scenarios; defaults to the standard grid.
    #[arg(long = "scenario")]
    pub scenarios: Vec<String>,
    /// Cross-check polar scenarios by simulation.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 0.005)]
    pub precision: f64,
    #[arg(long, default_value_t = 10_000_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Print JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let config: SimulateConfig = resolve(args.config.as_deref(), &args)?;
            let done = cmd_simulate(config)?;
            eprintln!("wrote {}", done.out.display());
        }
        Command::Estimate(args) => {
            let config: EstimateConfig = resolve(args.config.as_deref(), &args)?;
            let estimate = cmd_estimate(&config)?;
            println!("{}", serde_json::to_string_pretty(&estimate)?);
            if estimate.degenerate {
                eprintln!("warning: no value exceeds the first threshold");
            }
        }
        Command::Replicate(args) => {
            let config: ReplicateConfig = resolve(args.config.as_deref(), &args)?;
            let (done, _) = cmd_replicate(config, args.workers.unwrap_or_else(default_workers))?;
            eprintln!("wrote {}", done.out.display());
        }
        Command::Analyze(args) => {
            let config: AnalyzeConfig = resolve(args.config.as_deref(), &args)?;
            let outcome = cmd_analyze(&config)?;
            for e in &outcome.series {
                match e.estimate {
                    Some(est) => println!("{}\t{}", e.pair, est.lambda_hat),
                    None => println!("{}\t-", e.pair),
                }
            }
            if let Some(c) = outcome.correlation {
                println!("pearson\t{}", c.pearson);
            }
        }
        Command::Truth(args) => {
            let scenarios = if args.scenarios.is_empty() {
                config::DEFAULT_SCENARIOS.iter().map(|s| s.to_string()).collect()
            } else {
                args.scenarios
            };
            let rows = cmd_truth(&scenarios, args.verify, args.precision, args.draws, args.seed)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                for r in &rows {
                    match (r.monte_carlo, r.std_error) {
                        (Some(mc), Some(se)) => {
                            println!("{}\t{:.6}\tmonte_carlo={mc:.6}\tse={se:.1e}", r.scenario, r.lambda_u)
                        }
                        _ => println!("{}\t{:.6}", r.scenario, r.lambda_u),
                    }
                }
            }
        }
    }
    Ok(())
}
