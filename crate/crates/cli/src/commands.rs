use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use mirg_utd::harness::{run_plan, write_mse_csv, write_report_csv, write_scatter_csv};
use mirg_utd::ingestion::{
    align_with_prices, correlate_series, hill_diagnostics, parse_edge_list, utd_series,
    write_aligned_csv, write_hill_csv, write_series_csv, Alignment, DirectedEdgeList, Delimiter,
    HillDiagnostic, PriceSeries, SeriesEntry,
};
use mirg_utd::mirg::{build_graph, degrees, sample_degrees, write_degrees_csv, write_layer_edges};
use mirg_utd::tailstats::utd_estimate;
use mirg_utd::weights::{
    gumbel_true_utd, sample_weights, verify_mrv_true_utd, write_weights_csv, Dependence,
};
use mirg_utd::{Backend, DependenceScenario, ExperimentPlan, ExperimentReport, StreamSeed, UtdEstimate};
use serde::Serialize;

use crate::config::{
    entropy_seed, parse_threshold, write_config, AnalyzeConfig, EstimateConfig, ReplicateConfig,
    SimulateConfig,
};

fn seed_or_entropy(seed: &mut Option<u64>) -> Result<u64> {
    let s = *seed.get_or_insert_with(|| {
        let s = entropy_seed();
        eprintln!("seed: {s}");
        s
    });
    if s > i64::MAX as u64 {
        bail!("seed {s} does not fit in a signed 64-bit config value");
    }
    Ok(s)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn create_file(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn parse_scenario(text: &str) -> Result<DependenceScenario> {
    text.parse().with_context(|| format!("bad scenario `{text}`"))
}

fn parse_backend(text: &str) -> Result<Backend> {
    text.parse().with_context(|| format!("bad backend `{text}`"))
}

/// Samples one network: weights from child stream 0 of the seed, the graph
/// from child stream 1.
pub fn cmd_simulate(mut config: SimulateConfig) -> Result<SimulateConfig> {
    let seed = StreamSeed::new(seed_or_entropy(&mut config.seed)?);
    let scenario = parse_scenario(&config.scenario)?;
    let backend = parse_backend(&config.backend)?;
    let weights = sample_weights(&scenario, config.nodes, &mut seed.child(0).rng())?;
    create_dir(&config.out)?;
    write_weights_csv(&weights, create_file(&config.out.join("weights.csv"))?)?;
    let degree_matrix = if config.edges {
        let graph = build_graph(&weights, backend, seed.child(1))?;
        for l in 0..graph.layer_count() {
            let path = config.out.join(format!("edges_layer_{}.txt", l + 1));
            write_layer_edges(&graph, l, create_file(&path)?)?;
        }
        degrees(&graph)
    } else {
        sample_degrees(&weights, backend, seed.child(1))?
    };
    write_degrees_csv(&degree_matrix, create_file(&config.out.join("degrees.csv"))?)?;
    write_config(&config, &config.out)?;
    Ok(config)
}

pub fn replicate_plan(config: &ReplicateConfig) -> Result<ExperimentPlan> {
    let plan = ExperimentPlan {
        scenarios: config
            .scenarios
            .iter()
            .map(|s| parse_scenario(s))
            .collect::<Result<_>>()?,
        sizes: config.sizes.clone(),
        threshold: parse_threshold(&config.threshold)?,
        replications: config.replications,
        backend: parse_backend(&config.backend)?,
        master_seed: config.seed.context("seed must be resolved")?,
    };
    plan.validate()?;
    Ok(plan)
}

fn file_safe(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

/// Runs the plan and writes `report.csv`, `mse.csv` and one scatter file
/// per cell under `scatter/`.
pub fn cmd_replicate(mut config: ReplicateConfig, workers: usize) -> Result<(ReplicateConfig, ExperimentReport)> {
    seed_or_entropy(&mut config.seed)?;
    let plan = replicate_plan(&config)?;
    let started = Instant::now();
    let report = run_plan(&plan, workers)?;
    let scatter = config.out.join("scatter");
    create_dir(&scatter)?;
    write_report_csv(&report, create_file(&config.out.join("report.csv"))?)?;
    write_mse_csv(&report, create_file(&config.out.join("mse.csv"))?)?;
    for cell in &report.cells {
        let name = format!("{}_{}_N{}.csv", cell.scenario_index, file_safe(&cell.label()), cell.nodes);
        write_scatter_csv(cell, create_file(&scatter.join(name))?)?;
        eprintln!(
            "{} N={}: mean_d={:.4} truth={:.4} ({:.1}s)",
            cell.label(),
            cell.nodes,
            cell.degrees.mean,
            cell.truth,
            cell.wall_time.as_secs_f64()
        );
    }
    for cell in report.flagged() {
        eprintln!(
            "warning: {} N={}: {} of {} replications degenerate",
            cell.label(),
            cell.nodes,
            cell.degenerate_count,
            cell.replications()
        );
    }
    eprintln!("finished in {:.1}s", started.elapsed().as_secs_f64());
    write_config(&config, &config.out)?;
    Ok((config, report))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationSummary {
    pub pearson: f64,
    pub points: usize,
    pub alignment: Alignment,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeOutcome {
    pub series: Vec<SeriesEntry>,
    pub hill: Vec<HillDiagnostic>,
    pub correlation: Option<CorrelationSummary>,
}

fn period_label(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_owned)
        .with_context(|| format!("cannot derive a period label from {}", path.display()))
}

pub fn read_period(path: &Path, delimiter: Delimiter) -> Result<DirectedEdgeList> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let parsed = parse_edge_list(BufReader::new(file), period_label(path)?, delimiter)
        .with_context(|| format!("reading {}", path.display()))?;
    for d in &parsed.diagnostics {
        eprintln!("warning: {}:{}: {}", path.display(), d.line, d.message);
    }
    Ok(parsed.edges)
}

/// UTD between consecutive periods, Hill diagnostics per period and, when
/// a price file is given, the correlation with shrinkage ratios.
pub fn cmd_analyze(config: &AnalyzeConfig) -> Result<AnalyzeOutcome> {
    if config.periods.len() < 2 {
        bail!("analyze needs at least two period files, got {}", config.periods.len());
    }
    let threshold = parse_threshold(&config.threshold)?;
    let alignment: Alignment = config
        .alignment
        .parse()
        .with_context(|| format!("bad alignment `{}`", config.alignment))?;
    let delimiter: Delimiter = config
        .delimiter
        .parse()
        .with_context(|| format!("bad delimiter `{}`", config.delimiter))?;
    let periods = config
        .periods
        .iter()
        .map(|p| read_period(p, delimiter))
        .collect::<Result<Vec<_>>>()?;

    let hill = hill_diagnostics(&periods, config.hill_k);
    for h in hill.iter().filter(|h| !h.in_range) {
        match h.alpha_hat {
            Some(a) => eprintln!(
                "warning: period {}: Hill tail index {a:.3} (k = {}) is outside (1, 2)",
                h.period, h.k
            ),
            None => eprintln!("warning: period {}: Hill tail index undefined (k = {})", h.period, h.k),
        }
    }
    let series = utd_series(&periods, threshold)?;
    for e in series.iter().filter(|e| e.degenerate) {
        eprintln!(
            "warning: pair {}: degenerate ({})",
            e.pair,
            e.note.as_deref().unwrap_or("no estimate")
        );
    }

    create_dir(&config.out)?;
    write_series_csv(&series, create_file(&config.out.join("utd_series.csv"))?)?;
    write_hill_csv(&hill, create_file(&config.out.join("hill.csv"))?)?;

    let correlation = match &config.prices {
        None => {
            eprintln!("notice: no price file given; skipping correlation");
            None
        }
        Some(path) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let prices = PriceSeries::read_csv(BufReader::new(file))
                .with_context(|| format!("reading {}", path.display()))?;
            let rows = align_with_prices(&series, &prices, alignment)
                .with_context(|| format!("aligning with {}", path.display()))?;
            let utd: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
            let shrink: Vec<f64> = rows.iter().map(|r| r.shrinkage).collect();
            let pearson = correlate_series(&utd, &shrink)
                .with_context(|| format!("correlating with {}", path.display()))?;
            write_aligned_csv(&rows, create_file(&config.out.join("aligned.csv"))?)?;
            let summary = CorrelationSummary {
                pearson,
                points: rows.len(),
                alignment,
            };
            let json = serde_json::to_string_pretty(&summary)?;
            fs::write(config.out.join("correlation.json"), json + "\n")?;
            Some(summary)
        }
    };
    write_config(config, &config.out)?;
    Ok(AnalyzeOutcome {
        series,
        hill,
        correlation,
    })
}

/// Reads the first two numeric columns of each line; a non-numeric first
/// line is taken as a header.
pub fn read_pairs(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let parsed = match fields.as_slice() {
            [x, y, ..] => x.parse::<f64>().ok().zip(y.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((x, y)) => {
                a.push(x);
                b.push(y);
            }
            None if a.is_empty() && idx == 0 => {}
            None => bail!("{}:{}: expected two numbers, got `{line}`", path.display(), idx + 1),
        }
    }
    Ok((a, b))
}

pub fn cmd_estimate(config: &EstimateConfig) -> Result<UtdEstimate> {
    let threshold = parse_threshold(&config.threshold)?;
    let (a, b) = read_pairs(&config.input)?;
    utd_estimate(&a, &b, threshold).with_context(|| format!("estimating on {}", config.input.display()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruthRow {
    pub scenario: String,
    pub lambda_u: f64,
    /// Simulation cross-check, when requested.
    pub monte_carlo: Option<f64>,
    pub std_error: Option<f64>,
}

/// Limiting UTD per scenario; with `verify`, polar scenarios are also
/// estimated by simulation and must agree within `precision`.
pub fn cmd_truth(
    scenarios: &[String],
    verify: bool,
    precision: f64,
    draws: usize,
    seed: u64,
) -> Result<Vec<TruthRow>> {
    scenarios
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let scenario = parse_scenario(text)?;
            let mut row = TruthRow {
                scenario: scenario.to_string(),
                lambda_u: 0.0,
                monte_carlo: None,
                std_error: None,
            };
            match scenario.dependence {
                Dependence::GumbelCopula { theta } => row.lambda_u = gumbel_true_utd(theta)?,
                Dependence::PolarMrv { theta_law } if verify => {
                    let checked = verify_mrv_true_utd(
                        &theta_law,
                        &scenario.marginal,
                        precision,
                        draws,
                        StreamSeed::new(seed).child(i as u64),
                    )
                    .with_context(|| format!("verifying {text}"))?;
                    row.lambda_u = scenario.true_utd()?;
                    row.monte_carlo = Some(checked.monte_carlo.lambda);
                    row.std_error = Some(checked.monte_carlo.std_error);
                }
                Dependence::PolarMrv { .. } => row.lambda_u = scenario.true_utd()?,
            }
            Ok(row)
        })
        .collect()
}
