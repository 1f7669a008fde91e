//! End-to-end tests of the batch CLI: exit codes, canonical output,
//! determinism, and the figure/table file formats.

use std::process::{Command, Output};

fn bincube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bincube"))
        .args(args)
        .env_remove("BINCUBE_SEED")
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn usage_errors_exit_two() {
    let out = bincube(&["--suite", "regions", "--q", "1.5"]);
    assert_eq!(exit_code(&out), 2, "{out:?}");
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("q >= 2"), "{msg}");

    let out = bincube(&["--suite", "nonsense"]);
    assert_eq!(exit_code(&out), 2);

    let out = bincube(&["--suite", "figures", "--resolution", "32"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn hy_suite_runs_clean() {
    let out = bincube(&[
        "--suite", "hy", "--q", "4", "--dim", "2", "--grid", "64", "--seed", "1", "--count", "40",
    ]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON on stdout");
    assert_eq!(doc["suite"], "hy");
    assert_eq!(doc["schema_version"], 1);
}

#[test]
fn certify_emits_reference_certificate() {
    let dir = std::env::temp_dir().join("bincube_cli_certify");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("certify.json");
    let out = bincube(&["--suite", "certify", "--out", path.to_str().unwrap()]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cert = &doc["certificates"][0];
    assert_eq!(cert["verdict"], "pass");
    assert_eq!(cert["nodes_checked"], 1_893_001);
    let worst = cert["worst_node"][2].as_f64().unwrap();
    assert!(
        (worst - 0.0293596409).abs() <= 1e-6,
        "worst node value {worst}"
    );
}

#[test]
fn certify_fails_at_higher_threshold() {
    // the observed minimum is ~0.029359, so threshold 0.03 must fail
    let out = bincube(&["--suite", "certify", "--tol", "0.03"]);
    assert_eq!(
        exit_code(&out),
        1,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn certify_heuristic_margin_certificate() {
    let out = bincube(&["--suite", "certify", "--grid", "1"]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let certs = doc["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 2);
    assert_eq!(certs[1]["heuristic_lipschitz"], true);
    assert_eq!(certs[1]["verdict"], "pass");
}

#[test]
fn reports_are_byte_identical_for_same_seed() {
    let run = || {
        let out = bincube(&[
            "--suite", "young", "--seed", "77", "--count", "50", "--dim", "4",
        ]);
        assert_eq!(exit_code(&out), 0);
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn seed_env_variable_matches_flag() {
    let flagged = bincube(&["--suite", "young", "--seed", "123", "--count", "30"]);
    let env = Command::new(env!("CARGO_BIN_EXE_bincube"))
        .args(["--suite", "young", "--count", "30"])
        .env("BINCUBE_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(exit_code(&flagged), 0);
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(flagged.stdout, env.stdout);
}

#[test]
fn figures_written_to_directory() {
    let dir = std::env::temp_dir().join("bincube_cli_figs");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bincube(&[
        "--suite",
        "figures",
        "--resolution",
        "64",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    for name in ["fig1.csv", "fig2.csv", "fig3.csv", "fig5.csv"] {
        let body = std::fs::read_to_string(dir.join(name)).expect(name);
        assert!(body.lines().count() > 64, "{name} too short");
    }
    let fig2 = std::fs::read_to_string(dir.join("fig2.csv")).unwrap();
    assert!(fig2.starts_with("x,f\n"));
}

#[test]
fn energy_suite_accepts_set_file() {
    let dir = std::env::temp_dir().join("bincube_cli_set");
    std::fs::create_dir_all(&dir).unwrap();
    let set_path = dir.join("diag.set");
    std::fs::write(&set_path, "00\n11\n").unwrap();
    let out = bincube(&[
        "--suite",
        "energy",
        "--set",
        set_path.to_str().unwrap(),
        "--kappa",
        "2",
    ]);
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // the diagonal pair has reflected energy 6 against bound 4^{log2 6}
    let checks = doc["reports"][0]["checks"].as_array().unwrap();
    let reflected = checks
        .iter()
        .find(|c| c["id"] == "reflected_energy_bound")
        .unwrap();
    assert!((reflected["observed"].as_f64().unwrap() - 6.0).abs() < 1e-9);

    let missing = bincube(&["--suite", "energy", "--set", "/nonexistent/path.set"]);
    assert_eq!(exit_code(&missing), 2);
}

#[test]
fn entropy_suite_writes_probe_table_in_csv_mode() {
    let dir = std::env::temp_dir().join("bincube_cli_entropy");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bincube"))
        .args([
            "--suite", "entropy", "--count", "20", "--dim", "3", "--format", "csv",
        ])
        .current_dir(&dir)
        .env_remove("BINCUBE_SEED")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = std::fs::read_to_string(dir.join("binomial_entropy.csv")).unwrap();
    assert!(table.starts_with("n,h_n,h_2n,ratio\n"));
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn triadic_suite_reports_known_digits() {
    let out = bincube(&["--suite", "triadic"]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = doc["reports"][0]["checks"].as_array().unwrap();
    let triadic = checks.iter().find(|c| c["id"] == "triadic_p").unwrap();
    let p = triadic["observed"].as_f64().unwrap();
    assert!((p - 1.4702039297).abs() <= 1e-8, "p = {p}");
}

#[test]
fn stdout_reports_parse_and_sort_canonically() {
    let out = bincube(&["--suite", "regions"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert!(!reports.is_empty());
    let suites: Vec<&str> = reports
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    let mut sorted = suites.clone();
    sorted.sort();
    assert_eq!(suites, sorted);
    // object keys are emitted in sorted order
    let certificates_pos = text.find("\"reports\"").unwrap();
    let schema_pos = text.find("\"schema_version\"").unwrap();
    let suite_pos = text.find("\"suite\"").unwrap();
    assert!(certificates_pos < schema_pos && schema_pos < suite_pos);
}
