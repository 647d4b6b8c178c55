//! End-to-end runs of the `renyi-dpi` binary: documented examples, exit codes,
//! file round trips and report determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_renyi-dpi"))
}

fn run(args: &[&str]) -> (i32, Value) {
    run_with(bin().args(args))
}

fn run_with(cmd: &mut Command) -> (i32, Value) {
    let out: Output = cmd.output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let json = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    (out.status.code().expect("exit code"), json)
}

fn write_diag(path: &Path, diag: &[f64]) {
    let n = diag.len();
    let mut data = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        for j in 0..n {
            data.push(serde_json::json!([if i == j { *d } else { 0.0 }, 0.0]));
        }
    }
    let m = serde_json::json!({ "rows": n, "cols": n, "data": data });
    std::fs::write(path, m.to_string()).unwrap();
}

fn without_timestamp(mut v: Value) -> String {
    v.as_object_mut().unwrap().remove("timestamp");
    serde_json::to_string(&v).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn entropy_matches_classical_value_on_commuting_states() {
    let dir = tempfile::tempdir().unwrap();
    let (r, s) = (dir.path().join("r.json"), dir.path().join("s.json"));
    write_diag(&r, &[0.5, 0.5]);
    write_diag(&s, &[0.25, 0.75]);
    let (code, v) = run(&[
        "entropy",
        "--alpha",
        "2",
        "--z",
        "1",
        "--rho",
        r.to_str().unwrap(),
        "--sigma",
        s.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let want = (4.0f64 / 3.0).ln();
    assert!((num(&v["result"]["d_alpha_z"]) - want).abs() < 1e-13);
    assert!((num(&v["result"]["d_petz"]) - want).abs() < 1e-13);
    assert_eq!(v["params"]["p"], 2.0);
    assert_eq!(v["region"]["case_id"], 2);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["tolerances"]["cert_tol"].is_number());
}

#[test]
fn entropy_of_a_state_against_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r.json");
    assert!(bin()
        .args([
            "gen",
            "state",
            "--dim",
            "3",
            "--seed",
            "7",
            "--output",
            r.to_str().unwrap()
        ])
        .status()
        .unwrap()
        .success());
    let (code, v) = run(&[
        "entropy",
        "--alpha",
        "0.5",
        "--z",
        "0.7",
        "--rho",
        r.to_str().unwrap(),
        "--sigma",
        r.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    for key in ["d_alpha_z", "d_petz", "d_sandwiched", "d_umegaki"] {
        assert!(num(&v["result"][key]).abs() < 1e-12, "{key}: {}", v["result"][key]);
    }
}

#[test]
fn validation_failures_exit_two_with_error_object() {
    let (code, v) = run(&["entropy", "--alpha", "1", "--z", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "invalid_params");
    assert_eq!(v["error"]["exit_code"], 2);

    let (code, v) = run(&["entropy", "--alpha", "2", "--z", "1", "--tol", "cert_tol=0.5"]);
    assert_eq!(code, 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("cert_tol"));

    let (code, v) = run(&["entropy", "--alpha", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "validation");

    let (code, _) = run(&["certify", "--fixture", "nonsense", "--alpha", "1.5", "--z", "1"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["certify", "--fixture", "unitary", "--alpha", "3", "--z", "0.5"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["dpi-sweep", "--points", "1:1"]);
    assert_eq!(code, 2);
    let (code, _) = run_with(
        bin()
            .args(["dpi-sweep", "--points", "", "--seeds", "1"])
            .env("RENYI_DPI_THREADS", "zero"),
    );
    assert_eq!(code, 2);
}

#[test]
fn empty_grid_gives_empty_report() {
    let (code, v) = run(&["dpi-sweep", "--points", ""]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["items"].as_array().unwrap().len(), 0);
    assert!(v["result"]["summary"]["min_in_region_gap"].is_null());
}

#[test]
fn sweep_reports_in_region_minimum_and_out_of_region_search() {
    let (code, v) = run(&["dpi-sweep", "--points", "1.5:1,3:0.5", "--dims", "2,3", "--seeds", "5"]);
    assert_eq!(code, 0);
    let summary = &v["result"]["summary"];
    assert_eq!(summary["items"], 20);
    assert_eq!(summary["in_region_items"], 10);
    assert!(num(&summary["min_in_region_gap"]) >= -1e-9);
    assert_eq!(summary["violation_count"], 0);
    let outside = &v["result"]["points"][1];
    assert_eq!(outside["region"]["valid"], false);
    assert!(outside["min_gap"].is_number());
    assert_eq!(summary["failed_in_region"], 0);
    assert!(outside["min_gap_at"]["seed"].is_number());
    assert_eq!(v["seeds"]["count"], 5);
}

#[test]
fn sweep_output_is_independent_of_thread_count() {
    let args = [
        "dpi-sweep",
        "--points",
        "0.3:0.7,2:1.5",
        "--dims",
        "2,4",
        "--seeds",
        "6",
        "--seed-base",
        "40",
    ];
    let (_, one) = run_with(bin().args(args).env("RENYI_DPI_THREADS", "1"));
    let (_, four) = run_with(bin().args(args).env("RENYI_DPI_THREADS", "4"));
    assert_eq!(without_timestamp(one), without_timestamp(four));
}

#[test]
fn sweep_writes_output_and_clears_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.json");
    let status = bin()
        .args([
            "dpi-sweep",
            "--points",
            "1.5:1",
            "--dims",
            "2",
            "--seeds",
            "3",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["summary"]["items"], 3);
    assert!(!dir.path().join("sweep.json.partial.jsonl").exists());
}

#[test]
fn reports_are_deterministic_modulo_timestamp() {
    let cases: [&[&str]; 4] = [
        &["entropy", "--alpha", "1.5", "--z", "1", "--dim", "3", "--seed", "9"],
        &["dpi-sweep", "--points", "1.5:1", "--dims", "3", "--seeds", "4"],
        &[
            "certify",
            "--fixture",
            "pinching",
            "--alpha",
            "0.6",
            "--z",
            "1",
            "--dim",
            "3",
            "--with-recovery",
            "--with-proof-artifacts",
        ],
        &[
            "variational",
            "--dim",
            "2",
            "--seed",
            "3",
            "--sense",
            "max",
            "--pair-demo",
        ],
    ];
    for args in cases {
        let (c1, a) = run(args);
        let (c2, b) = run(args);
        assert_eq!(c1, c2);
        assert_eq!(without_timestamp(a), without_timestamp(b), "{args:?}");
    }
}

#[test]
fn certify_unitary_fixture_passes_every_condition() {
    let (code, v) = run(&[
        "certify",
        "--fixture",
        "unitary",
        "--alpha",
        "1.5",
        "--z",
        "1",
        "--dim",
        "3",
        "--seed",
        "11",
    ]);
    assert_eq!(code, 0);
    let c = &v["result"]["certificate"];
    assert_eq!(v["result"]["all_conditions_hold"], true);
    for key in ["adjoint_residual", "rho_residual", "sigma_residual"] {
        assert_eq!(c[key]["verdict"], true, "{key}");
    }
    assert_eq!(c["dpi"]["equality"], true);
    assert_eq!(v["violation"], false);
}

#[test]
fn certify_random_fixture_is_strict() {
    let (code, v) = run(&["certify", "--fixture", "random", "--alpha", "1.5", "--z", "1"]);
    assert_eq!(code, 0);
    let c = &v["result"]["certificate"];
    assert_eq!(c["adjoint_residual"]["verdict"], false);
    assert!(num(&c["dpi"]["gap"]) > 0.0);
}

#[test]
fn certify_identity_fixture_has_tiny_residuals() {
    let (code, v) = run(&[
        "certify",
        "--fixture",
        "identity",
        "--alpha",
        "2",
        "--z",
        "2",
        "--with-recovery",
    ]);
    assert_eq!(code, 0);
    let c = &v["result"]["certificate"];
    for key in ["adjoint_residual", "rho_residual", "sigma_residual"] {
        assert!(num(&c[key]["rel"]) <= 1e-10, "{key}: {}", c[key]);
    }
    let two = &v["result"]["recovery"]["two_two"];
    assert!(num(&two["choi_min_eig"]) >= -1e-9);
    assert!(num(&two["max_state_recovery"]) <= 1e-9);
}

#[test]
fn certify_reads_generated_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = run(&[
        "gen",
        "fixture",
        "--fixture",
        "product_partial_trace",
        "--dim",
        "2",
        "--seed",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dim_in"], 4);
    let files = &v["result"]["files"];
    let (code, v) = run(&[
        "certify",
        "--alpha",
        "0.3",
        "--z",
        "0.7",
        "--rho",
        files["rho"].as_str().unwrap(),
        "--sigma",
        files["sigma"].as_str().unwrap(),
        "--channel",
        files["channel"].as_str().unwrap(),
        "--with-proof-artifacts",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["all_conditions_hold"], true);
    assert!(v["result"]["certificate"]["claims"]["h_claim"]["verdict"]
        .as_bool()
        .unwrap());
}

#[test]
fn generated_channel_round_trips_into_certify() {
    let dir = tempfile::tempdir().unwrap();
    let ch = dir.path().join("ch.json");
    let r = dir.path().join("r.json");
    let s = dir.path().join("s.json");
    let spec = r#"{"kind":"depolarizing","dim":2,"p":0.4}"#;
    for (args, path) in [
        (vec!["gen", "channel", "--spec", spec], &ch),
        (vec!["gen", "state", "--dim", "2", "--seed", "1"], &r),
        (vec!["gen", "state", "--dim", "2", "--seed", "2"], &s),
    ] {
        assert!(bin()
            .args(&args)
            .args(["--output", path.to_str().unwrap()])
            .status()
            .unwrap()
            .success());
    }
    let (code, v) = run(&[
        "certify",
        "--alpha",
        "2",
        "--z",
        "1.5",
        "--rho",
        r.to_str().unwrap(),
        "--sigma",
        s.to_str().unwrap(),
        "--channel",
        ch.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(num(&v["result"]["certificate"]["dpi"]["gap"]) > 0.0);

    let (code, v) = run(&["gen", "channel", "--spec", r#"{"kind":"teleport"}"#]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "validation");
}

#[test]
fn variational_value_matches_trace_oracle() {
    let (code, v) = run(&[
        "variational",
        "--dim",
        "3",
        "--seed",
        "1",
        "--r0",
        "1",
        "--r1",
        "2",
        "--r2",
        "2",
    ]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert!(num(&r["trace_oracle"]["relative_error"]) <= 1e-9);
    assert!(num(&r["gradient_check"]["relative_error"]) <= 1e-5);
    assert!(num(&r["multi_start"]["max_distance_to_closed_form"]) <= 1e-5);
    assert_eq!(r["multi_start"]["starts"].as_array().unwrap().len(), 5);
}

#[test]
fn variational_identity_problem_stays_at_identity() {
    let (code, v) = run(&["variational", "--identity", "--dim", "3"]);
    assert_eq!(code, 0);
    assert!(num(&v["result"]["closed_form"]["distance_to_identity"]) < 1e-12);
    for s in v["result"]["multi_start"]["starts"].as_array().unwrap() {
        assert!(num(&s["distance_to_identity"]) < 1e-6);
    }
}

#[test]
fn variational_pair_demo_prints_scalar_solution() {
    let (code, v) = run(&["variational", "--dim", "2", "--pair-demo"]);
    assert_eq!(code, 0);
    let pair = &v["result"]["pair"];
    assert!(num(&pair["a_error"]) <= 1e-12);
    assert!(num(&pair["b_error"]) <= 1e-12);
    assert!((num(&pair["a"]["data"][0][0]) - 2f64.powf(4.0 / 3.0)).abs() <= 1e-12);
}

#[test]
fn variational_bridge_matches_psi() {
    let (code, v) = run(&["variational", "--alpha", "0.3", "--z", "0.7", "--dim", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["psi_bridge"]["sense"], "min");
    assert!(num(&v["result"]["psi_bridge"]["rel"]) <= 1e-9);
    let (code, _) = run(&["variational", "--alpha", "3", "--z", "2.5"]);
    assert_eq!(code, 2);
}

#[test]
fn loose_optimizer_tolerance_raises_violation_exit() {
    let (code, v) = run(&["variational", "--dim", "3", "--seed", "2", "--tol", "grad_tol=1e-2"]);
    assert_eq!(code, 3);
    assert_eq!(v["violation"], true);
    assert_eq!(v["result"]["multi_start"]["agree"], false);
}

#[test]
fn iteration_cap_surfaces_as_non_convergence() {
    let (code, v) = run(&["variational", "--dim", "3", "--max-iter", "1"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "non_convergence");
    assert_eq!(v["error"]["details"]["iterations"], 1);
}

#[test]
fn table_format_lists_flattened_keys() {
    let out = bin()
        .args(["entropy", "--alpha", "2", "--z", "1.5", "--format", "table"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("result.d_alpha_z")));
    assert!(text.lines().any(|l| l.starts_with("region.case_id")));
}
