//! Simulation and estimation of upper tail dependence (UTD) between the
//! degree sequences of multilayer inhomogeneous random graphs.
//!
//! The crate is organised around the simulation pipeline:
//!
//! * [`weights`] draws i.i.d. latent weight vectors (Gumbel copula with Pareto
//!   marginals, or a polar construction with a heavy-tailed radius) and
//!   computes the true UTD of each scenario.
//! * [`mirg`] turns a weight matrix into a multilayer Poisson multigraph and
//!   extracts per-layer degrees.
//! * [`tailstats`] holds the empirical UTD estimator and supporting
//!   statistics.
//! * [`harness`] runs seeded Monte Carlo replications over scenario grids.
//! * [`ingestion`] applies the estimator to observed interaction edge lists.

pub mod error;
pub mod harness;
pub mod ingestion;
pub mod mirg;
pub mod rng;
pub mod tailstats;
pub mod weights;

pub use error::{Error, Result};
pub use harness::{ExperimentPlan, ExperimentReport};
pub use mirg::{Backend, MultilayerDegrees, MultilayerGraph};
pub use rng::{SimRng, StreamSeed};
pub use tailstats::{ThresholdSpec, UtdEstimate};
pub use weights::{DependenceScenario, ParetoTail, ThetaLaw, WeightMatrix};
