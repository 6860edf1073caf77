use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use expurgated_jscc::sweep::SweepOutput;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jscc-ex"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn exponent_writes_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = config("fig1.toml");
    let args = ["exponent", fig1.to_str().unwrap(), "--grid-points", "300", "--report", "a.toml"];
    let o = run(dir.path(), &args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("two-class exponent"));
    assert!(stdout.contains("baseline"));

    let mut args2 = args;
    args2[5] = "b.toml";
    assert_eq!(code(&run(dir.path(), &args2)), 0);
    let a = std::fs::read_to_string(dir.path().join("a.toml")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.toml")).unwrap();
    assert_eq!(a, b);

    let report: toml::Table = a.parse().unwrap();
    assert_eq!(report["pair_mode"].as_str(), Some("fixed"));
    let two = report["two_class_value"].as_float().unwrap();
    let singles = report["fixed_q_single_class"].as_array().unwrap();
    assert!(singles.iter().all(|v| two > v.as_float().unwrap()));
    assert!(report["baseline_random_coding"].as_float().unwrap() < two);
}

#[test]
fn overrides_are_applied() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = config("fig1.toml");
    let o = run(
        dir.path(),
        &["exponent", fig1.to_str().unwrap(), "--grid-points", "200", "--rho-max", "50", "--tol", "1e-9", "--no-baseline"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: toml::Table = std::fs::read_to_string(dir.path().join("fig1_report.toml"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(!report.contains_key("baseline_random_coding"));
    let flags = report["boundary_flags"]["two_class"].as_table().unwrap();
    assert_eq!(flags["rho_max"].as_float(), Some(50.0));

    let bad = run(dir.path(), &["exponent", fig1.to_str().unwrap(), "--tol", "-1"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let fig3 = config("fig3.toml");
    let args = ["sweep", fig3.to_str().unwrap(), "--out", "s.csv", "--svg", "s.svg", "--grid-points", "400", "--no-baseline"];
    let o = run(dir.path(), &args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(!text.contains('\r'));
    let out = SweepOutput::read_csv(text.as_bytes()).unwrap();
    assert_eq!(out.rho.len(), 400);
    let levels = (out.level("two_class").unwrap(), out.level("single_class").unwrap());
    assert!((levels.0 - levels.1).abs() <= 1e-5, "{levels:?}");
    let svg = std::fs::read_to_string(dir.path().join("s.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.contains("<polyline"));

    let mut again = args;
    again[3] = "t.csv";
    again[5] = "t.svg";
    assert_eq!(code(&run(dir.path(), &again)), 0);
    assert_eq!(text, std::fs::read_to_string(dir.path().join("t.csv")).unwrap());
    assert_eq!(svg, std::fs::read_to_string(dir.path().join("t.svg")).unwrap());
}

#[test]
fn collapsed_pair_sweep_has_no_lift() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("same.toml");
    std::fs::write(
        &cfg,
        "rate = 0.75\nsource = [0.025, 0.975]\nchannel = [[0.9998, 0.0001, 0.0001], [0.0001, 0.9998, 0.0001], [0.1, 0.1, 0.8]]\ndistributions = [[0.4, 0.4, 0.2], [0.4, 0.4, 0.2]]\nbaseline = false\n[grid]\nnum_points = 300\n",
    )
    .unwrap();
    let o = run(dir.path(), &["sweep", "same.toml", "--out", "same.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = SweepOutput::read_csv(std::fs::read(dir.path().join("same.csv")).unwrap().as_slice()).unwrap();
    for (h, s) in out.column("hull").unwrap().iter().zip(out.column("setmax").unwrap()) {
        assert!((h - s).abs() <= 1e-12);
    }
}

#[test]
fn config_errors_exit_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.toml"),
        "rate = 0.5\nsource = [0.5, 0.5]\nchannel = [\n  [1.0, 0.0],\n  [0.5, 0.6],\n]\n",
    )
    .unwrap();
    let o = run(dir.path(), &["exponent", "bad.toml"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));

    let missing = run(dir.path(), &["exponent", "nope.toml"]);
    assert_eq!(code(&missing), 1);
    let usage = run(dir.path(), &["frobnicate"]);
    assert_eq!(code(&usage), 1);
}

#[test]
fn enumeration_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = config("fig1.toml");
    let args = ["exponent", fig1.to_str().unwrap(), "--grid-points", "100", "--block-length", "50", "--type-budget", "10"];
    let o = run(dir.path(), &args);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn block_length_table_is_printed() {
    let dir = tempfile::tempdir().unwrap();
    let fig1 = config("fig1.toml");
    let o = run(dir.path(), &["exponent", fig1.to_str().unwrap(), "--grid-points", "300", "--block-length", "20", "--no-baseline"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("block length k = 20"));
    assert!(stdout.contains("class 1") && stdout.contains("class 2"));
}

#[test]
fn optimize_binary_demo_collapses_to_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let demo = config("binary_demo.toml");
    let o = run(dir.path(), &["optimize", demo.to_str().unwrap(), "--starts", "4", "--grid-points", "200", "--no-baseline", "--report", "r.toml"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: toml::Table = std::fs::read_to_string(dir.path().join("r.toml")).unwrap().parse().unwrap();
    assert_eq!(report["pair_mode"].as_str(), Some("optimized"));
    for member in report["two_class_pair"].as_array().unwrap() {
        let q0 = member.as_array().unwrap()[0].as_float().unwrap();
        assert!((q0 - 0.5).abs() < 1e-4);
    }
}

#[test]
fn verify_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--suite", "hull", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.matches("[PASS]").count(), 4);
    assert!(!dir.path().join("counterexample.toml").exists());
    assert_eq!(code(&run(dir.path(), &["verify", "--suite", "nope"])), 1);
}
