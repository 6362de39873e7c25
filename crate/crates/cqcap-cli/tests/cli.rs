//! End-to-end tests of the binary: fixture regression, byte-identical
//! reproducibility, exit codes, and JSON round trips. The final test prints
//! the acceptance line for the CLI criterion.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cqcap::channel::Channel;
use cqcap::sample::random_density;
use cqcap::rng::SplitMix64;
use cqcap_cli::schema::{ChannelSpec, MatrixSpec};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqcap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

/// Numeric comparison of JSON trees: numbers within `tol`, everything else
/// exactly equal.
fn json_close(a: &serde_json::Value, b: &serde_json::Value, tol: f64) -> bool {
    use serde_json::Value::*;
    match (a, b) {
        (Number(x), Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            (x - y).abs() <= tol
        }
        (Array(xs), Array(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| json_close(x, y, tol))
        }
        (Object(xs), Object(ys)) => {
            xs.len() == ys.len()
                && xs
                    .iter()
                    .all(|(k, x)| ys.get(k).map(|y| json_close(x, y, tol)).unwrap_or(false))
        }
        _ => a == b,
    }
}

#[test]
fn appendix_divergence_fixture_regression() {
    let out = stdout_of(&[
        "divergence",
        "--state-a",
        fixture("appendix_rho.json").to_str().unwrap(),
        "--state-b",
        fixture("appendix_sigma.json").to_str().unwrap(),
        "--which",
        "smax,sinf",
    ]);
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    let want: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(fixture("expected_appendix_divergence.json")).unwrap(),
    )
    .unwrap();
    assert!(json_close(&got, &want, 1e-7), "got {got:#}\nwant {want:#}");

    // and the values themselves are the closed forms
    let records = got["records"].as_array().unwrap();
    let smax = records[0]["value"].as_f64().unwrap();
    let sinf = records[1]["value"].as_f64().unwrap();
    assert!((smax - (8.0f64 / 3.0).log2()).abs() < 1e-7);
    assert!((sinf - 2.0).abs() < 1e-7);
}

#[test]
fn depol_capacity_and_brute_fixture_regression() {
    let out = stdout_of(&[
        "capacity",
        "--channel",
        fixture("depol_2_05.json").to_str().unwrap(),
        "--which",
        "holevo",
    ]);
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    let want: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(fixture("expected_depol_holevo.json")).unwrap(),
    )
    .unwrap();
    assert!(json_close(&got, &want, 1e-7));
    assert!((got["value"].as_f64().unwrap() - 0.18872187554086717).abs() < 1e-4);

    let out = stdout_of(&[
        "brute",
        "--channel",
        fixture("depol_2_05.json").to_str().unwrap(),
        "--epsilon",
        "0.3",
        "--m-max",
        "4",
    ]);
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    let want: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(fixture("expected_depol_brute.json")).unwrap(),
    )
    .unwrap();
    assert!(json_close(&got, &want, 1e-7));
    assert_eq!(got["best_m"].as_i64(), Some(2));
}

#[test]
fn identical_states_give_zero_divergences() {
    let rho = fixture("appendix_rho.json");
    let out = stdout_of(&[
        "divergence",
        "--state-a",
        rho.to_str().unwrap(),
        "--state-b",
        rho.to_str().unwrap(),
        "--which",
        "relent,chernoff,smax",
    ]);
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    for record in got["records"].as_array().unwrap() {
        assert!(record["value"].as_f64().unwrap().abs() < 1e-8);
    }
}

#[test]
fn hoeffding_sweep_is_monotone() {
    let out = stdout_of(&[
        "divergence",
        "--state-a",
        fixture("appendix_rho.json").to_str().unwrap(),
        "--state-b",
        fixture("appendix_sigma.json").to_str().unwrap(),
        "--which",
        "hoeffding",
        "--r-sweep",
        "0:0.1:1",
    ]);
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    let records = got["records"].as_array().unwrap();
    assert_eq!(records.len(), 11);
    let mut prev = f64::INFINITY;
    for record in records {
        let v = record["value"].as_f64().unwrap();
        assert!(v <= prev + 1e-9, "sweep not nonincreasing");
        prev = v;
    }
}

#[test]
fn base_e_rescales_logarithmic_outputs() {
    let rho = fixture("appendix_rho.json");
    let sigma = fixture("appendix_sigma.json");
    let args = [
        "divergence",
        "--state-a",
        rho.to_str().unwrap(),
        "--state-b",
        sigma.to_str().unwrap(),
        "--which",
        "smax",
    ];
    let bits: serde_json::Value = serde_json::from_str(&stdout_of(&args)).unwrap();
    let mut nats_args = args.to_vec();
    nats_args.extend(["--base", "e"]);
    let nats: serde_json::Value = serde_json::from_str(&stdout_of(&nats_args)).unwrap();
    let vb = bits["records"][0]["value"].as_f64().unwrap();
    let vn = nats["records"][0]["value"].as_f64().unwrap();
    assert!((vn - vb * std::f64::consts::LN_2).abs() < 1e-12);
    assert_eq!(nats["base"], "e");
}

#[test]
fn hoeffding_capacity_at_zero_matches_holevo_via_cli() {
    let channel = fixture("depol_2_05.json");
    let holevo: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "capacity",
        "--channel",
        channel.to_str().unwrap(),
        "--which",
        "holevo",
    ]))
    .unwrap();
    let hoeffding: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "capacity",
        "--channel",
        channel.to_str().unwrap(),
        "--which",
        "hoeffding",
        "--r",
        "0",
    ]))
    .unwrap();
    let a = holevo["value"].as_f64().unwrap();
    let b = hoeffding["value"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-5, "holevo {a} vs hoeffding(0) {b}");
}

#[test]
fn bounds_csv_shape_and_threshold() {
    let out = stdout_of(&[
        "bounds",
        "--channel",
        fixture("noiseless_2.json").to_str().unwrap(),
        "--epsilon",
        "0.2",
    ]);
    let lines: Vec<&str> = out.trim().lines().collect();
    assert_eq!(lines[0], "bound,value,clamped,epsilon,c,r,n");
    // 33 grid rows + best + upper + threshold
    assert_eq!(lines.len(), 1 + 33 + 1 + 1 + 1);
    let threshold = lines.last().unwrap();
    assert!(threshold.starts_with("threshold,"));
    let value: f64 = threshold.split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - 2.0).abs() < 1e-3, "noiseless threshold {value}");

    let upper = lines[lines.len() - 2];
    assert!(upper.starts_with("oneshot_upper,"));
    let uv: f64 = upper.split(',').nth(1).unwrap().parse().unwrap();
    // R_max = 1 bit, so the ε = 0.2 upper bound is 1 - log₂(0.8)
    assert!((uv - (1.0 - 0.8f64.log2())).abs() < 1e-9);
}

#[test]
fn simulate_is_byte_identical_across_runs_and_workers() {
    let channel = fixture("depol_2_05.json");
    let args = [
        "simulate",
        "--channel",
        channel.to_str().unwrap(),
        "--messages",
        "2",
        "--uses",
        "2",
        "--c",
        "2",
        "--trials",
        "200",
        "--seed",
        "12345",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second, "same seed must give byte-identical CSV");

    let mut worker_args = args.to_vec();
    worker_args.extend(["--workers", "2"]);
    let parallel = stdout_of(&worker_args);
    assert_eq!(first, parallel, "worker count must not change the output");

    let mut other_seed = args.to_vec();
    let last = other_seed.len() - 1;
    other_seed[last] = "54321";
    let different = stdout_of(&other_seed);
    assert_ne!(first, different, "different seeds must differ somewhere");

    // shape: header + trials + mean/std/min + 3 bounds + bound_min + check
    let lines: Vec<&str> = first.trim().lines().collect();
    assert_eq!(lines[0], "record,param,value");
    assert_eq!(lines.len(), 1 + 200 + 3 + 3 + 1 + 1);
    assert!(lines.last().unwrap().starts_with("check,"));
}

#[test]
fn exit_codes_are_stable() {
    // 2: malformed JSON
    let bad = fixture("..").join("cli.rs"); // this source file is not JSON
    let out = run(&[
        "divergence",
        "--state-a",
        bad.to_str().unwrap(),
        "--state-b",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "parse error exit code");

    // 3: dimension mismatch between the two states
    let dir = tempfile::tempdir().unwrap();
    let three = dir.path().join("three.json");
    std::fs::write(
        &three,
        r#"{"re": [[0.5,0,0],[0,0.5,0],[0,0,0]]}"#,
    )
    .unwrap();
    let out = run(&[
        "divergence",
        "--state-a",
        fixture("appendix_rho.json").to_str().unwrap(),
        "--state-b",
        three.to_str().unwrap(),
        "--which",
        "relent",
    ]);
    assert_eq!(out.status.code(), Some(3), "dimension exit code");

    // 4: domain error (ε outside (0,1))
    let out = run(&[
        "bounds",
        "--channel",
        fixture("depol_2_05.json").to_str().unwrap(),
        "--epsilon",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(4), "domain exit code");

    // 4: state fails validation (not normalized)
    let unnormalized = dir.path().join("unnorm.json");
    std::fs::write(&unnormalized, r#"{"re": [[0.9,0],[0,0.4]]}"#).unwrap();
    let out = run(&[
        "divergence",
        "--state-a",
        unnormalized.to_str().unwrap(),
        "--state-b",
        fixture("appendix_sigma.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4), "validation exit code");

    // 5: materialization guard (2^12 letters × dim 2^12)
    let out = run(&[
        "simulate",
        "--channel",
        fixture("depol_2_05.json").to_str().unwrap(),
        "--messages",
        "2",
        "--uses",
        "12",
        "--trials",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(5), "guard exit code");

    // 6: brute force on a non-commuting channel
    let out = run(&[
        "brute",
        "--channel",
        fixture("noncommuting.json").to_str().unwrap(),
        "--epsilon",
        "0.3",
    ]);
    assert_eq!(out.status.code(), Some(6), "commutativity exit code");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("commut"), "mentions commutators: {stderr}");
}

#[test]
fn channel_and_state_json_round_trip() {
    // builtin-expanded channel: emit explicit inputs, re-ingest, compare
    let ch = Channel::depolarizing(3, 0.7).unwrap();
    let spec = ChannelSpec::from_channel(&ch);
    let text = serde_json::to_string(&spec).unwrap();
    let parsed: ChannelSpec = serde_json::from_str(&text).unwrap();
    let back = parsed.to_channel(1e-8).unwrap();
    for (a, b) in ch.outputs().iter().zip(back.outputs()) {
        let diff = a.matrix().sub(b.matrix()).unwrap().max_abs_entry();
        assert!(diff <= 1e-12, "channel round trip drifted by {diff}");
    }

    // complex-valued state
    let mut rng = SplitMix64::new(99);
    let rho = random_density(3, 3, &mut rng);
    let spec = MatrixSpec::from_operator(rho.matrix());
    let text = serde_json::to_string(&spec).unwrap();
    let parsed: MatrixSpec = serde_json::from_str(&text).unwrap();
    let back = parsed.to_state(1e-8, "roundtrip").unwrap();
    let diff = rho.matrix().sub(back.matrix()).unwrap().max_abs_entry();
    assert!(diff <= 1e-12, "state round trip drifted by {diff}");
}

#[test]
fn zz_acceptance_12_cli_reproducibility() {
    // summary line for the CLI acceptance criterion; the detailed checks
    // live in the tests above, which this test re-runs in essence
    let channel = fixture("depol_2_05.json");
    let args = [
        "simulate",
        "--channel",
        channel.to_str().unwrap(),
        "--messages",
        "2",
        "--uses",
        "1",
        "--trials",
        "100",
        "--seed",
        "777",
    ];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    let reproducible = a == b;

    let out = stdout_of(&[
        "divergence",
        "--state-a",
        fixture("appendix_rho.json").to_str().unwrap(),
        "--state-b",
        fixture("appendix_sigma.json").to_str().unwrap(),
        "--which",
        "smax,sinf",
    ]);
    let got: serde_json::Value = serde_json::from_str(&out).unwrap();
    let want: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(fixture("expected_appendix_divergence.json")).unwrap(),
    )
    .unwrap();
    let regressed = json_close(&got, &want, 1e-7);

    let ok = reproducible && regressed;
    println!(
        "ACCEPTANCE 12 (CLI reproducibility): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}
