use std::path::Path;
use std::process::{Command, Output};

use procurement::cli::{run_cli, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_OK, EXIT_USAGE};

fn procure(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_procure"))
        .args(args)
        .env_remove("BILEVEL_SEED")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, name: &str, n: &str, m: &str, seed: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let out = procure(&["generate", "--suppliers", n, "--items", m, "--seed", seed, "--out", s(&path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("procure").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn usage_errors_exit_64_and_help_exits_0() {
    assert_eq!(in_process(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(in_process(&["solve"]).0, EXIT_USAGE);
    assert_eq!(in_process(&["solve", "x.json", "--beam", "0"]).0, EXIT_USAGE);
    assert_eq!(in_process(&["solve", "x.json", "--stride", "0"]).0, EXIT_USAGE);
    assert_eq!(in_process(&["audit"]).0, EXIT_USAGE);
    let (code, out, _) = in_process(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("solve") && out.contains("sweep"));
}

#[test]
fn unreadable_and_invalid_instances_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = in_process(&["solve", s(&dir.path().join("missing.json"))]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("missing.json"));

    let path = generate(dir.path(), "a.json", "2", "1", "1");
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["buyer"]["demand"] = serde_json::json!([1_000_000]);
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, _, err) = in_process(&["solve", s(&path)]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("uncoverable"), "{err}");

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(in_process(&["solve", s(&path)]).0, EXIT_INVALID);

    let good = generate(dir.path(), "b.json", "2", "1", "1");
    assert_eq!(in_process(&["solve", s(&good), "--w1", "1.5"]).0, EXIT_INVALID);
}

#[test]
fn a_horizon_too_short_for_any_plan_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "a.json", "2", "1", "1");
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["horizon"] = serde_json::json!(1);
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, out, err) = in_process(&["solve", s(&path), "--particles", "3", "--iters", "2"]);
    assert_eq!(code, EXIT_INFEASIBLE);
    assert!(err.contains("no feasible allocation"));
    assert!(out.lines().any(|l| l == "objective,,,,,,inf"));
}

#[test]
fn solve_report_layout_and_plans_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), "a.json", "3", "2", "5");
    let plans = dir.path().join("plans.json");
    let (code, out, _) = in_process(&[
        "solve", s(&inst), "--particles", "4", "--iters", "3", "--stride", "4", "--plans", s(&plans),
    ]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "record,iteration,supplier,item,quantity,price,value");
    assert_eq!(lines.iter().filter(|l| l.starts_with("trace,")).count(), 4);
    assert!(lines.last().unwrap().starts_with("objective,"));
    assert!(lines.iter().all(|l| l.split(',').count() == 7));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(plans).unwrap()).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 3);
}

#[test]
fn seed_comes_from_the_environment_when_not_given() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), "a.json", "3", "1", "2");
    let from_env = Command::new(env!("CARGO_BIN_EXE_procure"))
        .args(["solve", s(&inst), "--particles", "4", "--iters", "3"])
        .env("BILEVEL_SEED", "9")
        .output()
        .unwrap();
    let from_flag = procure(&["solve", s(&inst), "--particles", "4", "--iters", "3", "--seed", "9"]);
    assert!(from_env.status.success());
    assert_eq!(from_env.stdout, from_flag.stdout);
}

#[test]
fn generated_suites_and_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("small");
    let out = procure(&["generate", "--suite", "small", "--seed", "1", "--out", s(&suite)]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(&suite).unwrap().count(), 14);

    // Compare on a two-instance directory to keep the test quick.
    let pair = dir.path().join("pair");
    std::fs::create_dir(&pair).unwrap();
    generate(&pair, "a.json", "2", "2", "1");
    generate(&pair, "b.json", "3", "1", "2");
    let csv = dir.path().join("cmp.csv");
    let out = procure(&[
        "compare", "--suite", s(&pair), "--reps", "2", "--particles", "3", "--iters", "2", "--stride", "4",
        "--solvers", "astar,greedy", "--out", s(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(csv).unwrap();
    // One header plus one row per problem and algorithm.
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    assert!(!text.contains('\r'));
}

#[test]
fn micro_audit_passes_from_the_command_line() {
    let (code, out, _) = in_process(&["audit", "--micro-suite", "--seeds", "30"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("cases 30"));
    assert!(out.contains("mismatches 0"));
}

#[test]
fn sweep_rejects_bad_grids() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generate(dir.path(), "a.json", "2", "1", "1");
    assert_eq!(in_process(&["sweep", s(&inst), "--w1", "0:1"]).0, EXIT_INVALID);
    assert_eq!(in_process(&["sweep", s(&inst), "--w1", "0:2:0.5"]).0, EXIT_INVALID);
}
