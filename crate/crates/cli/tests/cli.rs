use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wpvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpvol"))
        .args(args)
        .env_remove("WPVOL_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = wpvol(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["schema"], 1);
    value
}

#[test]
fn poly_prints_the_exact_polynomial() {
    let out = wpvol(&["poly", "--g", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "(1/48)·L1^2 + (1/12)·π^2");
    let v = json(&["poly", "--g", "0", "--n", "4"]);
    assert_eq!(v["command"], "poly");
    let constant = &v["polynomial"]["terms"][0];
    assert_eq!(constant["coeff"], "2/1");
    assert_eq!(constant["pi_pow"], 2);
}

#[test]
fn eval_at_exact_cone_angles_is_exact() {
    let v = json(&["eval", "--g", "1", "--labels", "1/2pi i"]);
    assert_eq!(v["command"], "eval");
    let text = stdout(&wpvol(&["eval", "--g", "1", "--labels", "pi i"]));
    assert!(text.contains("π^2"), "{text}");
}

#[test]
fn counterexample_is_negative_with_a_warning() {
    let out = wpvol(&["eval", "--g", "0", "--labels", "0,0,2i,6.183185307179586i"]);
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = stdout(&out)
        .split_whitespace()
        .find_map(|w| w.parse().ok())
        .expect("a number");
    assert!(value < 0.0);
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["poly", "--g", "0", "--n", "2"],
        vec!["eval", "--g", "0", "--labels", "0,0,bogus"],
        vec!["poly", "--g", "0"],
        vec!["no-such-command"],
        vec!["cache", "fill"],
        vec!["geom", "quad", "--theta1", "pi", "--theta2", "pi"],
    ] {
        let out = wpvol(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn identity_suites_pass() {
    for suite in ["limit", "corollary", "v05"] {
        let v = json(&["--max-dim", "4", "verify", suite]);
        assert_eq!(v["pass"], true, "{suite}: {v}");
    }
}

#[test]
fn cv_check_reports_pass_and_failure() {
    let v = json(&["verify", "cv", "--theta", "pi", "--tol", "1e-5"]);
    assert_eq!(v["pass"], true);
    // a comparison tighter than the quadrature can deliver fails with exit code 1
    let out = wpvol(&["verify", "cv", "--theta", "1", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cv_reduce_is_exact() {
    let v = json(&["cv-reduce", "--point", "6,3,15"]);
    let text = v.to_string();
    assert!(text.contains("\"3\""), "{text}");
    let first = json(&["cv-reduce", "--point", "6,3,15", "--strategy", "first"]);
    assert_eq!(v["point"], first["point"]);
}

#[test]
fn geometry_commands() {
    let v = json(&["geom", "quad", "--theta1", "1/2pi", "--theta2", "1/2pi"]);
    let delta = v["value"].as_f64().unwrap();
    assert!((delta - 3f64.acosh()).abs() < 1e-10, "{v}");
    let v = json(&["geom", "separation", "--a", "5", "--b", "4.0i"]);
    assert!(v["value"].is_null(), "{v}");
    assert_eq!(v["regime"], "ConeIntoGeodesic");
    let out = wpvol(&["geom", "crown", "--phi", "1/2pi", "--l", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scans_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, csv: &Path| {
        let out = wpvol(&[
            "--jobs",
            jobs,
            "scan",
            "--g",
            "0",
            "--n",
            "5",
            "--samples",
            "2000",
            "--seed",
            "3",
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        (stdout(&out), fs::read_to_string(csv).unwrap())
    };
    let a = run("1", &dir.path().join("a.csv"));
    let b = run("4", &dir.path().join("b.csv"));
    assert_eq!(a, b);
    assert!(a
        .1
        .starts_with("theta_1,theta_2,theta_3,theta_4,theta_5,value\n"));
    assert_eq!(a.1.lines().count(), 2001);
}

#[test]
fn cache_fill_and_clear_are_coherent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache_arg = cache.to_str().unwrap();
    let snapshot = || {
        let mut files: Vec<(String, String)> = fs::read_dir(&cache)
            .unwrap()
            .map(|e| {
                let p = e.unwrap().path();
                (
                    p.file_name().unwrap().to_string_lossy().into(),
                    fs::read_to_string(&p).unwrap(),
                )
            })
            .collect();
        files.sort();
        files
    };

    let v = json(&["--cache-dir", cache_arg, "--max-dim", "3", "cache", "fill"]);
    assert_eq!(v["loaded"], 0);
    let first = snapshot();
    assert_eq!(first.len(), v["entries"].as_array().unwrap().len());

    let again = json(&["--cache-dir", cache_arg, "--max-dim", "3", "cache", "fill"]);
    assert_eq!(again["written"], 0);

    let cleared = json(&["--cache-dir", cache_arg, "cache", "clear"]);
    assert_eq!(cleared["removed"].as_u64().unwrap() as usize, first.len());
    json(&["--cache-dir", cache_arg, "--max-dim", "3", "cache", "fill"]);
    assert_eq!(first, snapshot());

    // the cached table answers queries the same way as the in-memory one
    let cached = stdout(&wpvol(&[
        "--cache-dir",
        cache_arg,
        "poly",
        "--g",
        "1",
        "--n",
        "2",
    ]));
    let fresh = stdout(&wpvol(&["poly", "--g", "1", "--n", "2"]));
    assert_eq!(cached, fresh);
}

#[test]
fn identical_invocations_give_identical_output() {
    for args in [
        vec![
            "--format",
            "json",
            "chamber",
            "--g",
            "0",
            "--labels",
            "1/2pi i,3/2pi i,pi i,0",
        ],
        vec!["--format", "json", "cv-volume", "--theta", "2"],
        vec!["geom", "hexagon", "--l1", "2", "--l2", "2", "--c", "2"],
    ] {
        let a = wpvol(&args);
        let b = wpvol(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
