use std::io::Write;

use super::{CellReport, ExperimentReport};
use crate::error::Result;

pub const REPORT_HEADER: [&str; 12] = [
    "scenario",
    "N",
    "t_n",
    "truth",
    "mean_w",
    "mean_d",
    "mse_w",
    "mse_d",
    "scaledvar_w",
    "scaledvar_d",
    "n_reps",
    "degenerate_count",
];

pub const MSE_HEADER: [&str; 4] = ["scenario", "N", "target", "mse"];

/// One row per (scenario, N) cell.
pub fn write_report_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for c in &report.cells {
        w.write_record([
            c.label(),
            c.nodes.to_string(),
            c.t_n.to_string(),
            c.truth.to_string(),
            c.weights.mean.to_string(),
            c.degrees.mean.to_string(),
            c.weights.mse.to_string(),
            c.degrees.mse.to_string(),
            c.weights.scaled_variance.to_string(),
            c.degrees.scaled_variance.to_string(),
            c.replications().to_string(),
            c.degenerate_count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Long format: `target` is `weights` or `degrees`.
pub fn write_mse_csv<W: Write>(report: &ExperimentReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(MSE_HEADER)?;
    for c in &report.cells {
        for (target, mse) in [("weights", c.weights.mse), ("degrees", c.degrees.mse)] {
            w.write_record([c.label(), c.nodes.to_string(), target.to_string(), mse.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `rep,lambda_w,lambda_d` for one cell.
pub fn write_scatter_csv<W: Write>(cell: &CellReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rep", "lambda_w", "lambda_d"])?;
    for (rep, o) in cell.outcomes.iter().enumerate() {
        w.write_record([
            rep.to_string(),
            o.weights.lambda_hat.to_string(),
            o.degrees.lambda_hat.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
