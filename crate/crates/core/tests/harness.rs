use std::time::Duration;

use mirg_utd::harness::{
    replication_seed, run_plan, run_replication, summarize_cell, write_mse_csv, write_report_csv,
    write_scatter_csv, ExperimentPlan, ExperimentReport,
};
use mirg_utd::weights::ThetaLaw;
use mirg_utd::{Backend, DependenceScenario, ThresholdSpec};

fn strip_times(mut r: ExperimentReport) -> ExperimentReport {
    for c in &mut r.cells {
        c.wall_time = Duration::ZERO;
    }
    r
}

fn plan(scenarios: Vec<DependenceScenario>, sizes: Vec<usize>, reps: usize) -> ExperimentPlan {
    ExperimentPlan {
        scenarios,
        sizes,
        threshold: ThresholdSpec::TopCount(20),
        replications: reps,
        backend: Backend::Auto,
        master_seed: 0xfeed,
    }
}

#[test]
fn two_replication_plan_equals_manual_fold() {
    let s = DependenceScenario::gumbel(2.0).unwrap();
    let p = plan(vec![s], vec![400], 2);
    let report = run_plan(&p, 1).unwrap();
    let outcomes: Vec<_> = (0..2)
        .map(|r| {
            run_replication(&s, 400, p.threshold, p.backend, replication_seed(p.master_seed, 0, 400, r))
                .unwrap()
        })
        .collect();
    let manual = summarize_cell(0, &s, 400, 20, s.true_utd().unwrap(), outcomes, Duration::ZERO).unwrap();
    assert_eq!(strip_times(report).cells, vec![manual]);
}

#[test]
fn report_is_independent_of_worker_count() {
    let p = plan(
        vec![
            DependenceScenario::gumbel(1.5).unwrap(),
            DependenceScenario::polar(ThetaLaw::Beta { b1: 0.5, b2: 0.5 }).unwrap(),
        ],
        vec![300, 600],
        6,
    );
    let one = strip_times(run_plan(&p, 1).unwrap());
    let three = strip_times(run_plan(&p, 3).unwrap());
    assert_eq!(one, three);

    let csv = |r: &ExperimentReport| {
        let mut out = Vec::new();
        write_report_csv(r, &mut out).unwrap();
        write_mse_csv(r, &mut out).unwrap();
        for c in &r.cells {
            write_scatter_csv(c, &mut out).unwrap();
        }
        out
    };
    assert_eq!(csv(&one), csv(&three));
}

#[test]
fn replication_is_bitwise_reproducible() {
    let s = DependenceScenario::gumbel(2.0).unwrap();
    let seed = replication_seed(3, 0, 1000, 5);
    let a = run_replication(&s, 1000, ThresholdSpec::TopCount(50), Backend::Fast, seed).unwrap();
    let b = run_replication(&s, 1000, ThresholdSpec::TopCount(50), Backend::Fast, seed).unwrap();
    assert_eq!(a.weights.lambda_hat.to_bits(), b.weights.lambda_hat.to_bits());
    assert_eq!(a.degrees, b.degrees);
}

#[test]
fn boundary_scenarios_are_exact() {
    let full = DependenceScenario::polar(ThetaLaw::Constant { c: 0.5 }).unwrap();
    let none = DependenceScenario::polar(ThetaLaw::Bernoulli { p: 0.5 }).unwrap();
    let report = run_plan(&plan(vec![full, none], vec![500], 10), 1).unwrap();
    let full_cell = report.cell(0, 500).unwrap();
    assert!(full_cell.outcomes.iter().all(|o| o.weights.lambda_hat == 1.0));
    let none_cell = report.cell(1, 500).unwrap();
    assert!(none_cell.outcomes.iter().all(|o| o.degrees.lambda_hat == 0.0));
    assert!(none_cell.outcomes.iter().all(|o| o.weights.lambda_hat == 0.0));
}

#[test]
fn bias_variance_identity_per_cell() {
    let p = plan(
        vec![DependenceScenario::gumbel(2.0).unwrap(), DependenceScenario::gumbel(1.0).unwrap()],
        vec![300],
        8,
    );
    let report = run_plan(&p, 1).unwrap();
    for c in &report.cells {
        let n = c.replications() as f64;
        for s in [&c.weights, &c.degrees] {
            let bias = s.mean - c.truth;
            // Variance uses the n - 1 divisor, MSE divides by n.
            let lhs = s.mse;
            let rhs = (n - 1.0) / n * s.variance + bias * bias;
            assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
            assert!(s.mse >= bias * bias - 1e-12);
            assert!((s.scaled_variance - c.t_n as f64 * s.variance).abs() < 1e-12);
        }
    }
}

#[test]
fn invalid_plans_are_rejected() {
    let s = DependenceScenario::gumbel(2.0).unwrap();
    assert!(run_plan(&plan(vec![s], vec![300], 0), 1).is_err());
    assert!(run_plan(&plan(vec![s], vec![20], 1), 1).is_err());
    assert!(run_plan(&plan(vec![], vec![300], 1), 1).is_err());
}

#[test]
fn report_csv_header_and_rows() {
    let p = plan(vec![DependenceScenario::gumbel(2.0).unwrap()], vec![200, 300], 2);
    let report = run_plan(&p, 1).unwrap();
    let mut out = Vec::new();
    write_report_csv(&report, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(
        lines[0],
        "scenario,N,t_n,truth,mean_w,mean_d,mse_w,mse_d,scaledvar_w,scaledvar_d,n_reps,degenerate_count"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("gumbel:theta=2,200,20,"));

    let mut out = Vec::new();
    write_mse_csv(&report, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().next(), Some("scenario,N,target,mse"));
    assert_eq!(text.lines().count(), 5);
}
