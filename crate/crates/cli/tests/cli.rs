use std::process::{Command, Output};

use excess_atlas_core::oracle::{enum_graphs, GraphPredicate};
use num_bigint::BigUint;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_excess-atlas"))
        .args(args)
        .env_remove("EXCESS_ATLAS_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn count_examples() {
    for (n, k, method, expected) in [
        ("5", "-1", "modular", "125"),
        ("4", "2", "gf", "1"),
        ("4", "0", "oracle", "15"),
        ("4", "0", "recurrence", "15"),
    ] {
        let out = run(&["count", "--n", n, "--k", k, "--method", method]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert_eq!(stdout(&out), format!("{expected}\n"));
    }
}

#[test]
fn all_methods_agree_in_json() {
    let out = run(&["count", "--n", "7", "--k", "2", "--all-methods", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["count"] == "258125"));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["asymptotic", "--n", "10", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("positive-ratio"));

    let out = run(&["count", "--n", "9", "--k", "0", "--method", "oracle"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap 8"));

    let out = run(&["table", "--kind", "csg", "--n", "7..1", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["count", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_var_lowers_the_vertex_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_excess-atlas"))
        .args(["count", "--n", "20", "--k", "3"])
        .env("EXCESS_ATLAS_MAX_N", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap 10"));
}

#[test]
fn csg_table_matches_brute_force() {
    let out = run(&["table", "--kind", "csg", "--n", "1..7", "--k", "-1..3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k=-1,k=0,k=1,k=2,k=3");
    assert_eq!(lines.len(), 8);
    for (i, line) in lines[1..].iter().enumerate() {
        let n = i + 1;
        let table = enum_graphs(n, &[GraphPredicate::Connected]).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], n.to_string());
        for (j, k) in (-1i64..=3).enumerate() {
            let m = n as i64 + k;
            let brute = usize::try_from(m)
                .ok()
                .and_then(|m| table.count(GraphPredicate::Connected, m))
                .unwrap_or_default();
            assert_eq!(fields[j + 1], brute.to_string(), "n={n} k={k}");
        }
    }
}

#[test]
fn json_envelope_and_exact_integers() {
    let out = run(&["table", "--kind", "ratio", "--ratio", "1", "--n", "20,40,80", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["params"]["ratio"], "1/1");
    let rows = v["rows"].as_array().unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r["ratio"].as_f64().unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0));
    let exact: BigUint = rows[0]["exact"].as_str().unwrap().parse().unwrap();
    assert_eq!(exact.to_string(), rows[0]["exact"].as_str().unwrap());
    assert!(exact.bits() > 53);
}

#[test]
fn output_independent_of_thread_count() {
    let args = ["table", "--kind", "csg", "--n", "30,45", "--k", "0..4", "--format", "csv"];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run(&args).stdout, one.stdout);
}

#[test]
fn asymptotic_record() {
    let out = run(&["asymptotic", "--n", "40", "--k", "40", "--with-ratio", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &v["rows"][0];
    let ratio = row["ratio"].as_f64().unwrap();
    assert!((ratio - 0.7859).abs() < 1e-3, "{ratio}");
    assert!((row["lambda"].as_f64().unwrap() - 3.83).abs() < 0.01);

    let out = run(&["asymptotic", "--n", "1000", "--k", "1000", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let log10 = v["rows"][0]["log10_d"].as_f64().unwrap();
    assert!(log10.is_finite() && log10 > 5000.0);
}

#[test]
fn wright_and_patchwork_tables() {
    let out = run(&["table", "--kind", "wright", "--k", "1..2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let q1: Vec<&str> = v["rows"][0]["coefficients"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(q1, ["0", "0", "0", "0", "1/4", "-1/24"]);

    let out = run(&["table", "--kind", "patchwork", "--k", "0..1", "--format", "csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("excess,n,u_coefficients\n0,0,1\n"));
    let out = run(&["table", "--kind", "patchwork", "--k", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn series_output() {
    let out = run(&["series", "--kind", "unicycle", "--order", "5", "--format", "csv"]);
    let text = stdout(&out);
    let counts: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(counts, ["0", "0", "0", "1", "15", "222"]);
}

#[test]
fn verify_series_and_appendix() {
    let out = run(&["verify", "--suite", "series"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("round-trip exp/log: OK"));
    let out = run(&["verify", "--suite", "appendix"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("S_{q,0,k} ≤ 3q (k ≤ 150): OK"));
}
