use std::path::Path;
use std::process::{Command, Output};

use sirdiv::cli::{CurveTable, RunManifest};

fn sirdiv(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sirdiv"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SCENARIO: &str = "\
# small scenario
Delta = 0.25
delta = 0.5
theta = 1
n = 1, 2, 4
quantities = joint_success, selection_combining
realizations = 5000
seed = 9
";

#[test]
fn eval_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (vec!["eval", "joint_success_prob", "Δ=0.25", "δ=0.5", "n=2", "θ=1"], "0.687289278791\n"),
        (vec!["eval", "diversity_poly", "n=1", "x=0.7"], "1\n"),
        (vec!["eval", "diversity_loss", "n=2", "δ=0.5"], "1.333333333333\n"),
    ];
    for (args, want) in cases {
        let o = sirdiv(&args, dir.path());
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), want);
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["eval", "no_such_quantity", "x=1"],
        vec!["eval", "joint_success_prob", "Δ=-1", "δ=0.5", "n=2", "θ=1"],
        vec!["eval", "joint_success_prob", "Δ=0.25", "δ=0.5", "n=2", "θ=1", "bogus=3"],
        vec!["eval", "contention", "λ=1", "r=1", "α=2"],
        vec!["fig", "6"],
        vec!["fig", "1", "--sim"],
        vec!["compare", "--config", "missing.txt"],
        vec!["frobnicate"],
    ] {
        let o = sirdiv(&args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(!err.trim().is_empty());
    }
    assert_eq!(sirdiv(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ok.txt"), SCENARIO).unwrap();
    let o = sirdiv(&["compare", "--config", "ok.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("quantity,n,theta,theta2,analytic,estimate,std_error,z\n"));
    assert_eq!(text.lines().count(), 7);

    std::fs::write(dir.path().join("empty.txt"), "Delta = 0.25\ndelta = 0.5\nn =\n").unwrap();
    assert_eq!(sirdiv(&["compare", "--config", "empty.txt"], dir.path()).status.code(), Some(1));

    std::fs::write(dir.path().join("bad.txt"), "Delta = 0.25\ndelta = 0.5\nn = 1\nspeed = 3\n").unwrap();
    let o = sirdiv(&["compare", "--config", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4") && err.contains("speed"), "{err}");

    // one realization has zero standard error, so any discrepancy is infinitely many σ
    let o = sirdiv(&["compare", "--config", "ok.txt", "--realizations", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), SCENARIO).unwrap();
    let a = sirdiv(&["compare", "--config", "s.txt", "--workers", "1"], dir.path());
    let b = sirdiv(&["compare", "--config", "s.txt", "--workers", "8"], dir.path());
    let c = sirdiv(&["compare", "--config", "s.txt", "--seed", "10"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn manifest_replay_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), SCENARIO).unwrap();
    let runs: [&[&str]; 4] = [
        &["fig", "2", "--out", "a.csv", "--sim", "--realizations", "2000"],
        &["fig", "5", "--out", "a.csv", "--set", "n_max=40"],
        &["simulate", "--config", "s.txt", "--out", "a.csv"],
        &["eval", "selection_combining_prob", "Δ=0.5", "δ=0.5", "θ=1", "n=1:64:8", "--out", "a.csv"],
    ];
    for args in runs {
        assert_eq!(sirdiv(args, dir.path()).status.code(), Some(0), "{args:?}");
        let manifest = RunManifest::read(&dir.path().join("a.csv.manifest.json")).unwrap();
        assert_eq!(manifest.command_line, args.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        assert!(!manifest.resolved_config.is_empty());
        let o = sirdiv(&["replay", "a.csv.manifest.json", "--out", "b.csv"], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let a = std::fs::read(dir.path().join("a.csv")).unwrap();
        let b = std::fs::read(dir.path().join("b.csv")).unwrap();
        assert_eq!(a, b, "{args:?}");
        assert!(dir.path().join("b.csv.manifest.json").exists());
    }
}

#[test]
fn figure_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for fig in ["1", "2", "3", "4", "5"] {
        let o = sirdiv(&["fig", fig], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let table = CurveTable::from_csv(&text).unwrap();
        assert_eq!(table.to_csv(), text);
    }
}

#[test]
fn simulate_with_dump() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), SCENARIO).unwrap();
    let o = sirdiv(
        &["simulate", "--config", "s.txt", "--dump", "d.csv", "--realizations", "50"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("quantity,n,theta,theta2,estimate,std_error,count\n"));
    let dump = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let mut lines = dump.lines();
    assert_eq!(
        lines.next().unwrap(),
        "realization,point_count,q_t0,s_t0_a0,s_t0_a1,s_t0_a2,s_t0_a3"
    );
    assert_eq!(lines.count(), 50);
    assert!(dir.path().join("d.csv.manifest.json").exists());
}
