//! End-to-end runs of the command-line binary: exit codes, published
//! reference strings, and file round-trips.

use std::process::{Command, Output};

use qslimit::montecarlo::SampleBatch;
use qslimit::transform::IterationState;
use qslimit::Constants;

fn qslimit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qslimit"))
        .args(args)
        .output()
        .expect("spawn qslimit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Value after `name = ` on the report line.
fn reported_value(text: &str) -> f64 {
    let line = text.lines().find(|l| l.contains(" = ")).expect("report line");
    let tail = line.split(" = ").nth(1).expect("value field");
    tail.split_whitespace()
        .next()
        .expect("number")
        .parse()
        .expect("parse value")
}

#[test]
fn reproduce_paper_prints_the_published_values() {
    let out = qslimit(&["bounds", "--reproduce-paper"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    for needle in ["1.92e-2", "3.21e-6", "2.07e-6", "1.07e-7"] {
        assert!(text.contains(needle), "missing {needle} in:\n{text}");
    }
}

#[test]
fn bounds_values_and_exit_codes() {
    let out = qslimit(&["bounds", "--formula", "fn2", "--n", "100", "--A", "sigma"]);
    assert_eq!(code(&out), 0);
    let v = reported_value(&stdout(&out));
    assert!((v / 1.92e-2 - 1.0).abs() < 0.01, "fn2 at n = 100: {v}");

    let out = qslimit(&["bounds", "--formula", "cp", "--p", "2.5"]);
    assert_eq!(code(&out), 0);
    assert!(reported_value(&stdout(&out)) < 103_215.0);

    // the tail bound needs y >= 2 e^{L0} = 302.128...; 302.2 clears it,
    // 302.1 does not
    let out = qslimit(&["bounds", "--formula", "tail", "--y", "302.2"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let out = qslimit(&["bounds", "--formula", "tail", "--y", "302.1"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("NOT VALID"));

    let out = qslimit(&["bounds", "--formula", "tail", "--y", "302.1", "--allow-invalid"]);
    assert_eq!(code(&out), 0);

    let out = qslimit(&["bounds", "--formula", "nosuch", "--n", "5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown formula"));
}

#[test]
fn iterate_writes_grids_that_round_trip() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out_dir = dir.path().join("run");
    let out = qslimit(&[
        "iterate",
        "--start",
        "delta0",
        "--n",
        "6",
        "--repr",
        "density",
        "--x-grid=-3,12,1024",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    for name in ["density.csv", "meta.json", "certificates.json"] {
        assert!(out_dir.join(name).is_file(), "missing {name}");
    }
    let certs: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("certificates.json")).unwrap())
            .expect("certificates parse");
    for cert in certs.as_array().expect("certificate list") {
        assert_eq!(cert["valid"], true, "flagged certificate: {cert}");
    }

    // reload and re-save: the files must come back byte for byte
    let state = IterationState::load(&out_dir).expect("load state");
    let copy = dir.path().join("copy");
    state.save(&copy).expect("save state");
    for name in ["density.csv", "meta.json"] {
        assert_eq!(
            std::fs::read(out_dir.join(name)).unwrap(),
            std::fs::read(copy.join(name)).unwrap(),
            "{name} changed across a load/save cycle"
        );
    }
}

#[test]
fn iterate_refuses_a_density_for_the_point_mass() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = qslimit(&[
        "iterate",
        "--start",
        "delta0",
        "--n",
        "0",
        "--repr",
        "density",
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "stdout: {}", stdout(&out));
    assert!(
        stderr(&out).contains("density"),
        "unexpected message: {}",
        stderr(&out)
    );
}

#[test]
fn simulate_degenerate_cases_and_depth_cap() {
    // two keys cost exactly one comparison, so the normalized law is a point
    let out = qslimit(&["simulate", "--kind", "xn", "--n", "2", "--count", "100", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("mean      1.000000000"), "{text}");
    assert!(text.contains("variance  0.000000000"), "{text}");

    let out = qslimit(&[
        "simulate", "--kind", "zn", "--depth", "0", "--start", "delta0", "--count", "5",
        "--seed", "7",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("min 0.000000000  max 0.000000000"));

    let out = qslimit(&[
        "simulate", "--kind", "zn", "--depth", "30", "--count", "1", "--seed", "1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("depth"), "{}", stderr(&out));
}

#[test]
fn simulate_batches_round_trip() {
    let dir = tempfile::tempdir().expect("tempdir");
    let stem = dir.path().join("batch");
    let out = qslimit(&[
        "simulate",
        "--kind",
        "yn",
        "--n",
        "200",
        "--count",
        "500",
        "--seed",
        "5",
        "--out",
        stem.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let batch = SampleBatch::load(&stem).expect("load batch");
    assert_eq!(batch.values.len(), 500);
    assert!(batch.values.windows(2).all(|w| w[0] <= w[1]), "not sorted");

    let copy = dir.path().join("copy");
    batch.save(&copy).expect("save batch");
    for ext in ["csv", "meta.json"] {
        assert_eq!(
            std::fs::read(format!("{}.{ext}", stem.display())).unwrap(),
            std::fs::read(format!("{}.{ext}", copy.display())).unwrap(),
            ".{ext} changed across a load/save cycle"
        );
    }
}

#[test]
fn distance_between_stored_iterates() {
    let dir = tempfile::tempdir().expect("tempdir");
    let six = dir.path().join("six");
    let seven = dir.path().join("seven");
    for (n, path) in [("6", &six), ("7", &seven)] {
        let out = qslimit(&[
            "iterate",
            "--start",
            "delta0",
            "--n",
            n,
            "--repr",
            "density",
            "--x-grid=-3,12,1024",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    }
    let run = |metric: &str, extra: &[&str]| -> f64 {
        let mut args = vec![
            "distance",
            "--metric",
            metric,
            six.to_str().unwrap(),
            seven.to_str().unwrap(),
            "--quantiles",
            "100000",
        ];
        args.extend_from_slice(extra);
        let out = qslimit(&args);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
        reported_value(&stdout(&out))
    };
    // one step at n = 6 moves the law by a few hundredths at most
    let d2 = run("d2", &[]);
    assert!(d2 > 1e-3 && d2 < 0.1, "d2 = {d2}");
    let dp = run("dp", &["--p", "2"]);
    assert!((dp - d2).abs() < 1e-6, "dp(2) = {dp} vs d2 = {d2}");
    let ks = run("ks", &[]);
    assert!(ks > 1e-4 && ks < 0.1, "ks = {ks}");

    // a law against itself sits at zero for every metric
    let out = qslimit(&[
        "distance",
        "--metric",
        "sup",
        six.to_str().unwrap(),
        six.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(reported_value(&stdout(&out)), 0.0);
}

#[test]
fn moments_json_matches_the_closed_forms() {
    let out = qslimit(&["moments", "--order", "4", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let limit = v["limit"].as_array().expect("limit array");
    assert_eq!(limit[0].as_f64().unwrap(), 1.0);
    assert_eq!(limit[1].as_f64().unwrap(), 0.0);
    let sigma2 = Constants::get().sigma2;
    assert!((limit[2].as_f64().unwrap() - sigma2).abs() < 1e-12);

    let out = qslimit(&[
        "moments", "--order", "4", "--n", "10", "--start", "uniform:-1:1", "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let it = v["iterate"].as_array().expect("iterate array");
    // ten steps pull the uniform's variance most of the way to sigma^2
    let var = it[2].as_f64().unwrap();
    assert!((var - sigma2).abs() < 0.01, "variance after 10 steps: {var}");
}

#[test]
fn thread_cap_env_var_is_accepted() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = Command::new(env!("CARGO_BIN_EXE_qslimit"))
        .env("QSLIMIT_THREADS", "1")
        .args([
            "iterate",
            "--start",
            "delta0",
            "--n",
            "3",
            "--repr",
            "density",
            "--x-grid=-3,12,512",
            "--out",
            dir.path().join("run").to_str().unwrap(),
        ])
        .output()
        .expect("spawn qslimit");
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}
