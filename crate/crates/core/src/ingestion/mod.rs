//! UTD analysis of observed, period-by-period interaction networks.
//!
//! Each period is a directed edge list. Consecutive periods are compared on
//! the users present in both: reply direction is dropped, every directed
//! edge copy adds one to each endpoint (so a mutual pair adds two to each),
//! and the UTD estimator is applied to the paired degree sequences.

mod parse;
mod prices;

use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tailstats::{default_hill_k, hill_tail_index, utd_estimate_counts, ThresholdSpec, UtdEstimate};

pub use parse::{parse_edge_list, write_edge_list, Delimiter, LineDiagnostic, ParsedEdgeList};
pub use prices::{
    align_with_prices, correlate_series, shrinkage_ratio, write_aligned_csv, AlignedRow, Alignment,
    PriceRecord, PriceSeries,
};

/// Directed interactions of one period; repeated edges are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedEdgeList {
    pub label: String,
    pub edges: Vec<(String, String)>,
}

impl DirectedEdgeList {
    pub fn node_set(&self) -> BTreeSet<&str> {
        self.edges
            .iter()
            .flat_map(|(s, t)| [s.as_str(), t.as_str()])
            .collect()
    }

    /// Undirected degrees over all nodes of the period, in node-id order.
    pub fn undirected_degrees(&self) -> Vec<u64> {
        let nodes = self.node_set();
        let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut deg = vec![0u64; nodes.len()];
        for (s, t) in &self.edges {
            deg[index[s.as_str()]] += 1;
            deg[index[t.as_str()]] += 1;
        }
        deg
    }
}

/// Degrees of the common nodes of two periods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedDegreeSeries {
    pub label: String,
    /// Sorted node ids.
    pub nodes: Vec<String>,
    pub deg_a: Vec<u64>,
    pub deg_b: Vec<u64>,
}

pub fn pair_label(first: &str, second: &str) -> String {
    format!("{first}:{second}")
}

fn restricted_degrees(list: &DirectedEdgeList, index: &HashMap<&str, usize>) -> Vec<u64> {
    let mut deg = vec![0u64; index.len()];
    for (s, t) in &list.edges {
        if let (Some(&i), Some(&j)) = (index.get(s.as_str()), index.get(t.as_str())) {
            deg[i] += 1;
            deg[j] += 1;
        }
    }
    deg
}

/// Degrees on the node intersection, counting only edges whose endpoints
/// both lie in it. A self-reply adds two to its node.
pub fn paired_degrees(period_1: &DirectedEdgeList, period_2: &DirectedEdgeList) -> Result<PairedDegreeSeries> {
    let label = pair_label(&period_1.label, &period_2.label);
    let (a, b) = (period_1.node_set(), period_2.node_set());
    let common: Vec<&str> = a.intersection(&b).copied().collect();
    if common.is_empty() {
        return Err(Error::DegenerateSeries(format!("periods in `{label}` share no nodes")));
    }
    let index: HashMap<&str, usize> = common.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    Ok(PairedDegreeSeries {
        deg_a: restricted_degrees(period_1, &index),
        deg_b: restricted_degrees(period_2, &index),
        nodes: common.into_iter().map(str::to_owned).collect(),
        label,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesEntry {
    pub pair: String,
    pub first: String,
    pub second: String,
    /// Size of the node intersection.
    pub nodes: usize,
    pub estimate: Option<UtdEstimate>,
    pub degenerate: bool,
    pub note: Option<String>,
}

/// One UTD estimate per consecutive pair of periods. Pairs that cannot be
/// estimated are kept and flagged.
pub fn utd_series(periods: &[DirectedEdgeList], spec: ThresholdSpec) -> Result<Vec<SeriesEntry>> {
    if periods.len() < 2 {
        return Err(Error::EmptyInput(format!("need at least 2 periods, got {}", periods.len())));
    }
    Ok(periods
        .windows(2)
        .map(|w| {
            let (first, second) = (&w[0], &w[1]);
            let mut entry = SeriesEntry {
                pair: pair_label(&first.label, &second.label),
                first: first.label.clone(),
                second: second.label.clone(),
                nodes: 0,
                estimate: None,
                degenerate: true,
                note: None,
            };
            match paired_degrees(first, second) {
                Err(e) => entry.note = Some(e.to_string()),
                Ok(paired) => {
                    entry.nodes = paired.nodes.len();
                    match utd_estimate_counts(&paired.deg_a, &paired.deg_b, spec) {
                        Ok(est) => {
                            entry.degenerate = est.degenerate;
                            if est.degenerate {
                                entry.note = Some("no node exceeds the first threshold".into());
                            }
                            entry.estimate = Some(est);
                        }
                        Err(e) => entry.note = Some(e.to_string()),
                    }
                }
            }
            entry
        })
        .collect())
}

/// `pair,lambda,t_n,degenerate`; `lambda` and `t_n` are empty when no
/// estimate exists.
pub fn write_series_csv<W: Write>(series: &[SeriesEntry], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["pair", "lambda", "t_n", "degenerate"])?;
    for e in series {
        let (lambda, t_n) = match &e.estimate {
            Some(est) => (est.lambda_hat.to_string(), est.t_n.to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([e.pair.clone(), lambda, t_n, e.degenerate.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Tail-index check of one period's degree sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HillDiagnostic {
    pub period: String,
    pub nodes: usize,
    pub k: usize,
    pub alpha_hat: Option<f64>,
    /// Whether the estimate lies in `(1, 2)`.
    pub in_range: bool,
}

pub fn hill_diagnostics(periods: &[DirectedEdgeList], k: Option<usize>) -> Vec<HillDiagnostic> {
    periods
        .iter()
        .map(|p| {
            let deg: Vec<f64> = p.undirected_degrees().into_iter().map(|d| d as f64).collect();
            let k = k.unwrap_or_else(|| default_hill_k(deg.len()));
            let alpha_hat = hill_tail_index(&deg, k).ok();
            HillDiagnostic {
                period: p.label.clone(),
                nodes: deg.len(),
                k,
                alpha_hat,
                in_range: alpha_hat.is_some_and(|a| a > 1.0 && a < 2.0),
            }
        })
        .collect()
}

/// `period,nodes,k,alpha_hat,in_range`.
pub fn write_hill_csv<W: Write>(diags: &[HillDiagnostic], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["period", "nodes", "k", "alpha_hat", "in_range"])?;
    for d in diags {
        w.write_record([
            d.period.clone(),
            d.nodes.to_string(),
            d.k.to_string(),
            d.alpha_hat.map(|a| a.to_string()).unwrap_or_default(),
            d.in_range.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
