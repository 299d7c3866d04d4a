//! Seeded Monte Carlo replications over scenario grids.
//!
//! Each replication samples weights, builds a graph, and estimates UTD both
//! on the first two weight columns and on the first two degree columns with
//! the same threshold rule. Replication `r` of scenario `s` at size `N` is
//! seeded by [`replication_seed`], so a report depends only on the plan and
//! its master seed.

mod report;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mirg::{sample_degrees, Backend};
use crate::rng::StreamSeed;
use crate::tailstats::{
    replication_summary, utd_estimate, utd_estimate_counts, ReplicationSummary, ThresholdSpec,
    UtdEstimate,
};
use crate::weights::{sample_weights, DependenceScenario};

pub use report::{write_mse_csv, write_report_csv, write_scatter_csv, MSE_HEADER, REPORT_HEADER};

/// Share of degenerate replications above which a cell is flagged.
pub const DEGENERATE_FLAG_SHARE: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub scenarios: Vec<DependenceScenario>,
    pub sizes: Vec<usize>,
    pub threshold: ThresholdSpec,
    pub replications: usize,
    pub backend: Backend,
    pub master_seed: u64,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::param("replications", "need at least one"));
        }
        if self.scenarios.is_empty() || self.sizes.is_empty() {
            return Err(Error::param("plan", "needs at least one scenario and one size"));
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        for &n in &self.sizes {
            self.threshold.top_count(n)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationOutcome {
    /// Estimate from the weight columns.
    pub weights: UtdEstimate,
    /// Estimate from the degree columns.
    pub degrees: UtdEstimate,
}

impl ReplicationOutcome {
    pub fn is_degenerate(&self) -> bool {
        self.weights.degenerate || self.degrees.degenerate
    }
}

pub fn replication_seed(master_seed: u64, scenario_index: usize, nodes: usize, rep: usize) -> StreamSeed {
    StreamSeed::new(master_seed)
        .child(scenario_index as u64)
        .child(nodes as u64)
        .child(rep as u64)
}

/// One pass: weights from `seed.child(0)`, graph from `seed.child(1)`.
pub fn run_replication(
    scenario: &DependenceScenario,
    nodes: usize,
    threshold: ThresholdSpec,
    backend: Backend,
    seed: StreamSeed,
) -> Result<ReplicationOutcome> {
    let weights = sample_weights(scenario, nodes, &mut seed.child(0).rng())?;
    let degrees = sample_degrees(&weights, backend, seed.child(1))?;
    Ok(ReplicationOutcome {
        weights: utd_estimate(weights.column(0), weights.column(1), threshold)?,
        degrees: utd_estimate_counts(degrees.column(0), degrees.column(1), threshold)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellReport {
    pub scenario_index: usize,
    pub scenario: DependenceScenario,
    pub nodes: usize,
    pub t_n: usize,
    pub truth: f64,
    pub weights: ReplicationSummary,
    pub degrees: ReplicationSummary,
    pub degenerate_count: usize,
    pub flagged: bool,
    pub wall_time: Duration,
    /// Per-replication estimates in replication order.
    pub outcomes: Vec<ReplicationOutcome>,
}

impl CellReport {
    pub fn label(&self) -> String {
        self.scenario.to_string()
    }

    pub fn replications(&self) -> usize {
        self.outcomes.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub cells: Vec<CellReport>,
}

impl ExperimentReport {
    pub fn cell(&self, scenario_index: usize, nodes: usize) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.scenario_index == scenario_index && c.nodes == nodes)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &CellReport> {
        self.cells.iter().filter(|c| c.flagged)
    }
}

/// Folds replication outcomes, in order, into a cell.
pub fn summarize_cell(
    scenario_index: usize,
    scenario: &DependenceScenario,
    nodes: usize,
    t_n: usize,
    truth: f64,
    outcomes: Vec<ReplicationOutcome>,
    wall_time: Duration,
) -> Result<CellReport> {
    let lw: Vec<f64> = outcomes.iter().map(|o| o.weights.lambda_hat).collect();
    let ld: Vec<f64> = outcomes.iter().map(|o| o.degrees.lambda_hat).collect();
    let degenerate_count = outcomes.iter().filter(|o| o.is_degenerate()).count();
    Ok(CellReport {
        scenario_index,
        scenario: *scenario,
        nodes,
        t_n,
        truth,
        weights: replication_summary(&lw, truth, t_n)?,
        degrees: replication_summary(&ld, truth, t_n)?,
        degenerate_count,
        flagged: degenerate_count as f64 > DEGENERATE_FLAG_SHARE * outcomes.len() as f64,
        wall_time,
        outcomes,
    })
}

/// Runs every (scenario, size) cell on a pool of `workers` threads.
pub fn run_plan(plan: &ExperimentPlan, workers: usize) -> Result<ExperimentReport> {
    plan.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::param("workers", e.to_string()))?;
    pool.install(|| {
        let mut cells = Vec::new();
        for (si, scenario) in plan.scenarios.iter().enumerate() {
            let truth = scenario.true_utd()?;
            for &nodes in &plan.sizes {
                let t_n = plan.threshold.top_count(nodes)?;
                let started = Instant::now();
                let outcomes = (0..plan.replications)
                    .into_par_iter()
                    .map(|rep| {
                        let seed = replication_seed(plan.master_seed, si, nodes, rep);
                        run_replication(scenario, nodes, plan.threshold, plan.backend, seed)
                    })
                    .collect::<Result<Vec<_>>>()?;
                cells.push(summarize_cell(
                    si,
                    scenario,
                    nodes,
                    t_n,
                    truth,
                    outcomes,
                    started.elapsed(),
                )?);
            }
        }
        Ok(ExperimentReport { cells })
    })
}
