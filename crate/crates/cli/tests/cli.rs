use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use num_bigint::BigUint;
use proptest::prelude::*;
use qgrowth_cli::RunConfig;

fn qgrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .display()
        .to_string()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn su2_growth_table() {
    let o = qgrowth(&[
        "growth", "--ring", "su2", "--gen", "u1:1", "--n", "100", "--dimfn", "vector",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,b");
    assert_eq!(lines[4], "3,30");
    assert_eq!(lines.len(), 102);
}

#[test]
fn radius_zero_is_a_single_row() {
    let o = qgrowth(&["growth", "--ring", "su2", "--gen", "u1:1", "--n", "0"]);
    assert_eq!(stdout(&o), "n,b\n0,1\n");
}

#[test]
fn free_group_rows() {
    let o = qgrowth(&[
        "growth",
        "--ring",
        "free:k=2",
        "--gen",
        "a:1,b:1,A:1,B:1",
        "--n",
        "12",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for (n, line) in stdout(&o).lines().skip(1).enumerate() {
        let expect = BigUint::from(2u32) * BigUint::from(3u32).pow(n as u32) - 1u32;
        assert_eq!(line, format!("{n},{expect}"));
    }
}

#[test]
fn kac_report() {
    let o = qgrowth(&["kac", "--ring", "su2q:q=0.5", "--gen", "u1:1"]);
    assert_eq!(stdout(&o).trim(), "kac=false, qdim(u1)=2.5");
    let o = qgrowth(&["kac", "--ring", "su2", "--gen", "u1:1"]);
    assert!(stdout(&o).starts_with("kac=true"));
}

#[test]
fn dim_report_and_strict_bounds() {
    let o = qgrowth(&[
        "dim",
        "--ring",
        "torus:d=2",
        "--gen",
        "(1,0),(0,1),(-1,0),(0,-1)",
        "--n",
        "200",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["gamma"].as_f64().unwrap() - 2.0).abs() < 0.05);
    assert_eq!(v["classification"], "polynomial");

    let o = qgrowth(&[
        "dim", "--ring", "su2", "--gen", "u1:1", "--n", "500", "--strict", "2",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("strict=false"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        qgrowth(&["growth", "--ring", "nope", "--gen", "u1", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qgrowth(&["growth", "--ring", "su2", "--gen", "u1:0", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qgrowth(&["growth", "--ring", "su2", "--gen", "u1"])
            .status
            .code(),
        Some(2)
    );
    let capped = qgrowth(&[
        "growth", "--ring", "free:k=2", "--gen", "a,b,A,B", "--n", "30", "--cap", "1000",
    ]);
    assert_eq!(capped.status.code(), Some(3));
    let lam = qgrowth(&[
        "dixmier",
        "growth-exponent",
        "--ring",
        "torus:d=1",
        "--element",
        &fixture("cos.json"),
        "--lambda-min",
        "1e5",
        "--lambda-max",
        "1e6",
        "--lambda-steps",
        "8",
    ]);
    assert_eq!(
        lam.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&lam.stderr)
    );
}

#[test]
fn validate_flags_broken_tables() {
    let good = qgrowth(&["validate", "--ring", "su2", "--samples", "10"]);
    assert_eq!(good.status.code(), Some(0));
    assert!(stdout(&good).starts_with("ring=su2, sampled=10, violations=0"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(
        &path,
        r#"{"unit": "0",
            "irreps": [ {"id": "0", "dim": 1, "conj": "0"}, {"id": "1", "dim": 1, "conj": "1"} ],
            "fusion": [ {"left": "0", "right": "0", "out": {"0": 1}},
                        {"left": "0", "right": "1", "out": {"1": 1}},
                        {"left": "1", "right": "0", "out": {"1": 1}},
                        {"left": "1", "right": "1", "out": {"1": 1}} ] }"#,
    )
    .unwrap();
    // Loading a file ring validates it, so the bad table is a spec error.
    let o = qgrowth(&["validate", "--ring", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fourier_suite_on_shipped_models() {
    for model in ["s3.json", "z4.json"] {
        let o = qgrowth(&["fourier-verify", "--group", &data(model), "--seed", "7"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let text = stdout(&o);
        for line in text.lines().skip(1).take(10) {
            let (_, rest) = line.split_once('=').unwrap();
            let r: f64 = rest.split_whitespace().next().unwrap().parse().unwrap();
            assert!(r < 1e-10, "{line}");
        }
        assert!(text.ends_with("passed=true\n"));
    }
}

#[test]
fn circle_growth_exponent() {
    let o = qgrowth(&[
        "dixmier",
        "growth-exponent",
        "--ring",
        "torus:d=1",
        "--element",
        &fixture("cos.json"),
        "--lambda-max",
        "100",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let gamma = v["gamma"].as_f64().unwrap();
    assert!((0.4..=0.7).contains(&gamma), "{gamma}");
    assert!(v["uncertainty"].as_f64().unwrap() > 0.0);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 16);
    assert_eq!(pts[0].as_array().unwrap().len(), 3);
}

#[test]
fn calculus_and_domination_experiments() {
    let o = qgrowth(&["dixmier", "calculus", "--samples", "2", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qgrowth(&[
        "dixmier",
        "calculus",
        "--group",
        "z4",
        "--bump",
        "-2,1",
        "--samples",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qgrowth(&["dixmier", "domination", "--points", "e,(012)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qgrowth(&[
        "dixmier",
        "domination",
        "--group",
        "s3-dual",
        "--samples",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = qgrowth(&["dixmier", "domination", "--points", "nowhere"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_runs_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &[
            "growth",
            "--ring",
            "su2q:q=0.3",
            "--gen",
            "u1:1",
            "--n",
            "40",
            "--dimfn",
            "quantum",
            "--format",
            "json",
        ],
        &[
            "fourier-verify",
            "--group",
            "s3",
            "--seed",
            "11",
            "--samples",
            "20",
            "--format",
            "json",
        ],
        &[
            "dixmier",
            "calculus",
            "--group",
            "s3",
            "--samples",
            "2",
            "--seed",
            "5",
        ],
    ];
    for (i, args) in runs.iter().enumerate() {
        let a = dir.path().join(format!("{i}a"));
        let b = dir.path().join(format!("{i}b"));
        for p in [&a, &b] {
            let mut full: Vec<&str> = args.to_vec();
            let out = p.to_str().unwrap();
            full.extend(["--out", out]);
            assert_eq!(qgrowth(&full).status.code(), Some(0));
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn cached_tables_equal_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let cases: [&[&str]; 3] = [
        &["growth", "--ring", "su2", "--gen", "u1:1", "--n", "50"],
        &[
            "growth",
            "--ring",
            "su2q:q=0.7",
            "--gen",
            "u1:1,u2:1",
            "--n",
            "30",
            "--dimfn",
            "quantum",
        ],
        &[
            "growth",
            "--ring",
            "product:su2+torus:d=1",
            "--gen",
            "[u1|(0)],[u0|(1)],[u0|(-1)]",
            "--n",
            "25",
            "--format",
            "json",
        ],
    ];
    for args in cases {
        let fresh = qgrowth(args);
        let mut cached_args = args.to_vec();
        cached_args.extend(["--cache-dir", cache]);
        let first = qgrowth(&cached_args);
        let second = qgrowth(&cached_args);
        assert_eq!(fresh.stdout, first.stdout);
        assert_eq!(first.stdout, second.stdout);
    }
    let entries = fs::read_dir(dir.path().join("growth")).unwrap().count();
    assert_eq!(entries, 3);
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "growth",
        "--ring",
        "su2",
        "--gen",
        "u1:1",
        "--n",
        "10",
        "--cache-dir",
        cache,
    ];
    let fresh = qgrowth(&args);
    let entry = fs::read_dir(dir.path().join("growth"))
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    fs::write(
        &entry,
        r#"{"key": "other", "exact": true, "values": ["7"]}"#,
    )
    .unwrap();
    assert_eq!(qgrowth(&args).stdout, fresh.stdout);
}

#[test]
fn file_ring_edits_change_the_cache_key() {
    let dir = tempfile::tempdir().unwrap();
    let ring = dir.path().join("z2.json");
    let z2 = |conj: &str| {
        format!(
            r#"{{"unit": "0",
                "irreps": [ {{"id": "0", "dim": 1, "conj": "0"}}, {{"id": "1", "dim": 1, "conj": "{conj}"}} ],
                "fusion": [ {{"left": "0", "right": "0", "out": {{"0": 1}}}},
                            {{"left": "0", "right": "1", "out": {{"1": 1}}}},
                            {{"left": "1", "right": "0", "out": {{"1": 1}}}},
                            {{"left": "1", "right": "1", "out": {{"0": 1}}}} ] }}"#
        )
    };
    fs::write(&ring, z2("1")).unwrap();
    let key1 = qgrowth_cli::cache::cache_key("file", ring.to_str().unwrap(), "{1:1}", "vector", 3);
    fs::write(&ring, z2("1") + " ").unwrap();
    let key2 = qgrowth_cli::cache::cache_key("file", ring.to_str().unwrap(), "{1:1}", "vector", 3);
    assert_ne!(key1, key2);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn run_config_round_trips_through_json(n in 0usize..1000, seed in any::<u64>(), tol in proptest::option::of(1e-14f64..1.0)) {
        let n_text = n.to_string();
        let seed_text = seed.to_string();
        let mut args = vec!["qgrowth", "growth", "--ring", "su2", "--gen", "u1:1", "--n", &n_text, "--seed", &seed_text];
        let tol_text;
        if let Some(t) = tol {
            tol_text = t.to_string();
            args.extend(["--tol", &tol_text]);
        }
        let cfg = <RunConfig as clap::Parser>::try_parse_from(&args).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
