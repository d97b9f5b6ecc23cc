//! End-to-end checks of the inetcalc binary: exit codes, seeded
//! reproducibility, trace output, validation diagnostics, the bench tables
//! and the JSON round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn profile(name: &str) -> String {
    let p = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../inet/profiles"));
    p.join(name).to_str().unwrap().to_string()
}

fn inetcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inetcalc"))
        .args(args)
        .env_remove("INETCALC_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn run_prints_result_and_stats() {
    let out = inetcalc(&["run", &profile("nat.inet"), "--net", "one_plus_one"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("< S(S(Z)) | >"), "{text}");
    assert!(text.contains("\"interactions\":2"), "{text}");
}

#[test]
fn graph_engine_gives_the_same_answer() {
    let calc = inetcalc(&["run", &profile("nat.inet"), "--net", "two_times_three"]);
    let graph = inetcalc(&[
        "run",
        &profile("nat.inet"),
        "--net",
        "two_times_three",
        "--engine",
        "graph",
    ]);
    assert_eq!(calc.status.code(), Some(0));
    assert_eq!(graph.status.code(), Some(0));
    let line = |o: &Output| stdout(o).lines().next().unwrap().to_string();
    assert_eq!(line(&calc), line(&graph));
}

#[test]
fn endless_exceeds_the_limit_with_exit_3() {
    let out = inetcalc(&["run", &profile("endless.inet"), "--limit", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("\"total\":1000"));
}

#[test]
fn limit_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_inetcalc"))
        .args(["run", &profile("endless.inet")])
        .env("INETCALC_LIMIT", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("\"total\":12"));
}

#[test]
fn blocked_pair_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blocked.inet");
    std::fs::write(&path, "agents{A/0,B/0} net main = < | A = B >").unwrap();
    let out = inetcalc(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("blocked: A >< B"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = [
        "run",
        &profile("nat.inet"),
        "--net",
        "two_times_three",
        "--policy",
        "random",
        "--seed",
        "7",
        "--trace",
    ];
    let a = inetcalc(&args);
    let b = inetcalc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn trace_of_dlist_append_has_two_interaction_lines() {
    let out = inetcalc(&["trace", &profile("dlist.inet"), "--net", "append_12_3"]);
    assert_eq!(out.status.code(), Some(0));
    let interactions = stdout(&out)
        .lines()
        .filter(|l| l.starts_with("step") && l.contains("interaction"))
        .count();
    assert_eq!(interactions, 2);
}

#[test]
fn trace_of_a_normal_form_is_empty() {
    let out = inetcalc(&["trace", &profile("cstar.inet"), "--net", "zero"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("step"));
}

#[test]
fn head_strategy_stops_early() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("head.inet");
    std::fs::write(
        &path,
        "agents{Z/0,S/1,Add/2} rules{Add[x,S(y)] >< S[Add(x,y)]; Add[x,x] >< Z[];} \
         net main = < S(x) | x = Z >",
    )
    .unwrap();
    let out = inetcalc(&["run", path.to_str().unwrap(), "--strategy", "head"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("< S(x) | Z = x >"), "{text}");
    assert!(text.contains("\"total\":0"), "{text}");
}

#[test]
fn trace_shows_the_worked_first_step() {
    let out = inetcalc(&["trace", &profile("nat.inet"), "--net", "one_plus_zero"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert!(first.contains("interaction Add >< S"), "{first}");
    assert!(
        first.contains("< a | %0 = Z, Add(%0, %1) = Z, S(%1) = a >"),
        "{first}"
    );
}

#[test]
fn unknown_flags_exit_1_and_help_exits_0() {
    let out = inetcalc(&["run", &profile("nat.inet"), "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    let out = inetcalc(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_1() {
    // seed without random policy
    let out = inetcalc(&["run", &profile("nat.inet"), "--net", "one_plus_one", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(1));
    // fairness on the calculus engine
    let out = inetcalc(&["run", &profile("nat.inet"), "--net", "one_plus_one", "--fair"]);
    assert_eq!(out.status.code(), Some(1));
    // missing net selection
    let out = inetcalc(&["run", &profile("nat.inet")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("one_plus_one"), "{err}");
}

#[test]
fn check_reports_duplicate_rules_with_both_spans() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.inet");
    std::fs::write(
        &path,
        "agents{Z/0,Add/2}\nrules{\n  Add[x,x] >< Z[];\n  Z[] >< Add[y,y];\n}\n",
    )
    .unwrap();
    let out = inetcalc(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("duplicate rule"), "{err}");
    assert!(err.contains("4:"), "span of the second rule: {err}");
    assert!(err.contains("3:"), "span of the first rule: {err}");
}

#[test]
fn check_accepts_all_shipped_profiles() {
    let dir = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../inet/profiles"));
    let mut args = vec!["check".to_string()];
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().and_then(|e| e.to_str()) == Some("inet") {
            args.push(p.to_str().unwrap().to_string());
        }
    }
    let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let out = inetcalc(&refs);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bench_dlist_interactions_are_constant() {
    let out = inetcalc(&["bench", "dlist-append", "--max", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], "2", "interactions constant: {line}");
        rows += 1;
    }
    assert_eq!(rows, 64);
}

#[test]
fn bench_cstar_interactions_are_constant() {
    let out = inetcalc(&["bench", "cstar-add", "--max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[2], "2", "interactions constant: {line}");
        assert!(cols[5].parse::<u64>().unwrap() <= 12, "{line}");
    }
}

#[test]
fn multiple_files_merge() {
    let out = inetcalc(&[
        "run",
        &profile("nat.inet"),
        &profile("bool.inet"),
        "--net",
        "and_chain",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("< F | >"));
}

#[test]
fn json_output_roundtrips_through_the_net_format() {
    let out = inetcalc(&[
        "run",
        &profile("nat.inet"),
        "--net",
        "one_plus_one",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["outcome"], "normal");
    assert_eq!(doc["configuration"], "< S(S(Z)) | >");
    assert_eq!(doc["stats"]["interactions"], 2);

    // feed the emitted net back in as a .json input
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    std::fs::write(&path, serde_json::to_string(&doc["net"]).unwrap()).unwrap();
    let again = inetcalc(&[
        "run",
        &profile("nat.inet"),
        path.to_str().unwrap(),
        "--net",
        "result",
        "--engine",
        "graph",
    ]);
    assert_eq!(again.status.code(), Some(0), "{}", String::from_utf8_lossy(&again.stderr));
    assert!(stdout(&again).contains("< S(S(Z)) | >"));
}
