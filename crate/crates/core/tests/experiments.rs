use std::fs;

use semidyn_core::exact::{conjugate, GaussianRational, MoebiusMap};
use semidyn_core::experiments::{
    run, run_example1, run_example1_with, run_example2, run_example2_with, run_example3_with, CheckKind,
    Example1Inputs, Example2Inputs, Example3Inputs, ExperimentOptions, ExperimentReport,
};
use semidyn_core::expr::parse_rational_map;

fn quick() -> ExperimentOptions {
    ExperimentOptions { orbit_length: 20_000, resolution: 200, ..ExperimentOptions::default() }
}

fn pattern(r: &ExperimentReport) -> Vec<(String, bool)> {
    r.checks.iter().map(|c| (c.name.clone(), c.pass)).collect()
}

fn exact_checks(r: &ExperimentReport) -> Vec<(String, bool)> {
    r.checks.iter().filter(|c| c.kind == CheckKind::Exact).map(|c| (c.name.clone(), c.pass)).collect()
}

#[test]
fn all_examples_pass_with_default_budgets() {
    for which in 1..=3 {
        let report = run(which, &ExperimentOptions::default()).unwrap();
        assert!(report.pass, "example{which}: {:?}", report.failing());
        assert_eq!(report.seed, 42);
        assert_eq!(report.duration_ms, None);
    }
}

#[test]
fn exact_checks_do_not_depend_on_budgets() {
    let tiny = ExperimentOptions { orbit_length: 200, burn_in: 100, resolution: 50, saturation_rounds: 3, ..quick() };
    for which in 1..=3 {
        let report = run(which, &tiny).unwrap();
        let exact = exact_checks(&report);
        assert!(!exact.is_empty());
        assert!(exact.iter().all(|(_, pass)| *pass), "example{which}: {exact:?}");
        let other = run(which, &ExperimentOptions { seed: 9, ..tiny.clone() }).unwrap();
        assert_eq!(exact_checks(&other), exact);
    }
}

#[test]
fn tampered_lift_fails_the_exact_check() {
    let inputs = Example1Inputs {
        f_tilde: parse_rational_map("(3*z+5*z^2)/(1+3*z+5*z^2)").unwrap(),
        ..Example1Inputs::default()
    };
    let report = run_example1_with(&inputs, &quick()).unwrap();
    assert!(!report.pass);
    assert!(!report.check("lift of f equals f_tilde").unwrap().pass);
    assert!(!report.check("phi o f = f_tilde o phi").unwrap().pass);
    assert!(report.check("lift of g equals g_tilde").unwrap().pass);
}

#[test]
fn example2_reports_the_printed_lift_discrepancy() {
    let report = run_example2(&quick()).unwrap();
    assert!(report.check("printed g_tilde fails the semi-conjugacy").unwrap().pass);
    assert!(report.notes.iter().any(|n| n.contains("(5*z^2+40*z-29)/(3*z^2+40*z-27)")), "{:?}", report.notes);
}

#[test]
fn example2_coverage_holds_on_a_smaller_window() {
    let inputs = Example2Inputs { window: 2.0, ..Example2Inputs::default() };
    let report = run_example2_with(&inputs, &quick()).unwrap();
    assert!(report.check("E-saturation of <f,g> covers the real axis").unwrap().pass);
}

#[test]
fn verdicts_do_not_depend_on_the_seed() {
    let base = run_example2(&ExperimentOptions::default()).unwrap();
    let other = run_example2(&ExperimentOptions { seed: 7, ..ExperimentOptions::default() }).unwrap();
    assert_eq!(pattern(&base), pattern(&other));
    assert_ne!(base.to_json(), other.to_json());
}

#[test]
fn shifted_g_breaks_the_julia_set_check() {
    let shift = MoebiusMap::new(
        GaussianRational::from_int(1),
        GaussianRational::from_int(5),
        GaussianRational::from_int(0),
        GaussianRational::from_int(1),
    )
    .unwrap();
    let base = Example3Inputs::default();
    let inputs = Example3Inputs { g: conjugate(&base.g, &shift), ..base };
    let report = run_example3_with(&inputs, &quick()).unwrap();
    assert!(!report.check("J(<f,g>) within 0.02 of [-2,2]").unwrap().pass);
    assert!(!report.pass);
}

#[test]
fn cubic_chebyshev_keeps_the_julia_set() {
    let inputs = Example3Inputs { f: parse_rational_map("z^3-3*z").unwrap(), ..Example3Inputs::default() };
    let report = run_example3_with(&inputs, &ExperimentOptions::default()).unwrap();
    assert!(report.check("J(<f,g>) within 0.02 of [-2,2]").unwrap().pass);
    assert!(report.check("J_f within 0.02 of [-2,2]").unwrap().pass);
}

#[test]
fn reports_and_artifacts_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let opts = ExperimentOptions { out_dir: Some(dir.path().to_path_buf()), ..quick() };
    let snapshot = || {
        let mut files: Vec<_> = fs::read_dir(dir.path().join("example1"))
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name(), fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let first = run_example1(&opts).unwrap();
    let before = snapshot();
    let second = run_example1(&opts).unwrap();
    let after = snapshot();
    assert_eq!(first, second);
    assert!(!first.artifacts.is_empty());
    let names: Vec<String> = before.iter().map(|(n, _)| n.to_string_lossy().into_owned()).collect();
    assert!(names.iter().any(|n| n == "report.json"), "{names:?}");
    assert!(names.iter().any(|n| n.ends_with(".pgm")), "{names:?}");
    assert!(names.iter().any(|n| n.ends_with(".csv")), "{names:?}");
    for ((name, x), (_, y)) in before.iter().zip(&after) {
        assert!(x == y, "{name:?} differs between runs");
    }
    assert_eq!(before.len(), after.len());
}
