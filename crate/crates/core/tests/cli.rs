use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn optb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

const KEYS: [&str; 13] = [
    "tool_version",
    "command",
    "n",
    "slope",
    "c",
    "seed",
    "precision",
    "roots",
    "sum",
    "normalized_residual",
    "genericity",
    "checks",
    "data",
];

#[test]
fn identities_n4_passes_with_stable_keys() {
    let out = optb(&["identities", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = KEYS.to_vec();
    want.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, want);
    assert_eq!(r["command"], "identities");
    assert_eq!(r["n"], 4);
    assert_eq!(r["precision"], "binary64");
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() > 10);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn monodromy_prints_bundle_torsion_polynomial() {
    let out = optb(&["monodromy", "--word", "L R^-6", "--torsion"]);
    assert_eq!(out.status.code(), Some(0));
    // 3 + f5(x3) + x2 f4'(x3) − x1 f5'(x3)
    assert_eq!(
        json_of(&out)["data"]["torsion"],
        "-4*x1*x3^3 + x3^4 + 3*x2*x3^2 + 6*x1*x3 - 3*x3^2 - 2*x2 + 4"
    );
}

#[test]
fn monodromy_without_torsion_gives_triple() {
    let out = optb(&["monodromy", "--word", "L"]);
    assert_eq!(out.status.code(), Some(0));
    let t = &json_of(&out)["data"]["triple"];
    assert_eq!(t[0], "x3");
    assert_eq!(t[1], "x2");
}

#[test]
fn geometric_fiber_sum_vanishes_for_n4() {
    let out = optb(&["fiber-sum", "--n", "4", "--slope", "1,0", "--c", "1.3,0.7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json_of(&out);
    assert_eq!(r["c"][0], 1.3);
    assert!(r["normalized_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(r["genericity"]["squarefree"], true);
    let roots = r["roots"].as_array().unwrap();
    assert_eq!(roots.len(), r["data"]["fibers"][0]["geometric_degree"].as_u64().unwrap() as usize);
    assert!(roots[0]["inv_torsion"].as_array().unwrap().len() == 2);
}

#[test]
fn fibered_trace_values_are_not_generic() {
    let out = optb(&["fiber-sum", "--n", "4", "--slope", "1,0", "--c", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-generic"));
}

#[test]
fn n6_geometric_sum_cancels_the_extra_sum() {
    let out = optb(&[
        "fiber-sum", "--n", "6", "--slope", "5,1", "--samples", "5", "--seed", "7", "--component", "all",
    ]);
    let r = json_of(&out);
    // geometric_vanishing fails on this bundle; see README
    assert_eq!(out.status.code(), Some(1));
    for f in r["data"]["fibers"].as_array().unwrap() {
        assert!(f["normalized_total"].as_f64().unwrap() < 1e-10);
        let closed = &f["extra_closed_form"];
        let extra = &f["extra_sum"];
        for k in 0..2 {
            let (a, b) = (closed[k].as_f64().unwrap(), extra[k].as_f64().unwrap());
            assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
        }
    }
}

#[test]
fn counterexample_rejects_other_residues() {
    assert_eq!(optb(&["counterexample", "--n", "5"]).status.code(), Some(2));
    assert_eq!(optb(&["counterexample", "--n", "-6", "--q-max", "-1"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(optb(&[]).status.code(), Some(2));
    assert_eq!(optb(&["fiber-sum", "--n", "4"]).status.code(), Some(2));
    assert_eq!(optb(&["fiber-sum", "--n", "4", "--slope", "2,2"]).status.code(), Some(2));
    assert_eq!(optb(&["identities", "--n", "-2"]).status.code(), Some(2));
    assert_eq!(optb(&["identities", "--n", "4", "--precision", "binary32"]).status.code(), Some(2));
    assert_eq!(optb(&["--help"]).status.code(), Some(0));
}

#[test]
fn slope_fns_accepts_mu_squared_only_when_asked() {
    assert_eq!(optb(&["slope-fns", "--n", "4", "--slope", "2,0"]).status.code(), Some(2));
    let out = optb(&["slope-fns", "--n", "4", "--slope", "2,0", "--allow-nonprimitive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["data"]["parity"], "even");
}

#[test]
fn torsion_lambda_at_zero_for_n4() {
    let out = optb(&["torsion-lambda", "--n", "4", "--y", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["data"]["value"][0], 4.0);
}

#[test]
fn cross_check_agrees() {
    let out = optb(&["cross-check", "--n", "-3", "--slope", "3,1", "--samples", "10", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json_of(&out)["normalized_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn jacobi_selftest_small() {
    let out = optb(&["jacobi-selftest", "--seed", "3", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["data"]["trials"], 20);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = optb(&[
            "fiber-sum", "--n", "-5", "--slope", "3,1", "--samples", "3", "--seed", "11",
            "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn sweep_is_sorted_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = dir.path().join("jobs.json");
    fs::write(
        &jobs,
        r#"[
            {"command": "fiber-sum", "n": 5, "slope": [2, 1], "samples": 2, "seed": 1},
            {"command": "identities", "n": -3},
            {"command": "fiber-sum", "n": 4, "slope": [1, 0], "samples": 2, "seed": 1},
            {"command": "monodromy", "word": "L R^-2"}
        ]"#,
    )
    .unwrap();
    let run = || optb(&["sweep", "--jobs", jobs.to_str().unwrap()]);
    let (first, second) = (run(), run());
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, second.stdout);
    let r = json_of(&first);
    let keys: Vec<String> = r["data"]["jobs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|j| j["job"].as_str().unwrap().to_string())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(keys.len(), 4);
}

#[test]
fn sweep_reports_failed_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = dir.path().join("jobs.json");
    fs::write(&jobs, r#"[{"command": "fiber-sum", "n": 4, "slope": [1, 0], "c": [2, 0]}]"#).unwrap();
    let out = optb(&["sweep", "--jobs", jobs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    fs::write(&jobs, r#"[{"command": "sweep", "jobs": "x"}]"#).unwrap();
    assert_eq!(optb(&["sweep", "--jobs", jobs.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn csv_has_one_row_per_root() {
    let out = optb(&["--format", "csv", "fiber-sum", "--n", "4", "--slope", "2,1", "--c", "1.5,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "command");
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| &r[1] == "4" && &r[6] == "geometric"));
    let json = optb(&["fiber-sum", "--n", "4", "--slope", "2,1", "--c", "1.5,0.5"]);
    assert_eq!(json_of(&json)["roots"].as_array().unwrap().len(), rows.len());
}
