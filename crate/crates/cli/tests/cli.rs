use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use thermoqubit::{
    bogoliubov_factors, fidelity_numeric, mandel_numeric, PhysicalAmplitudes, Truncation,
};
use thermoqubit_cli::commands::read_csv;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thermoqubit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_to(dir: &Path, file: &str, args: &[&str]) -> (Output, std::path::PathBuf) {
    let path = dir.join(file);
    let out = bin().args(args).arg("--out").arg(&path).output().unwrap();
    (out, path)
}

fn parse(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn fidelity_sweep_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(dir.path(), "f.csv", &["sweep-fidelity"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = read_csv(&path).unwrap();
    assert_eq!(
        header,
        [
            "n_bar",
            "fidelity_numeric",
            "fidelity_closed_form",
            "discrepancy"
        ]
    );
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[0][0], "0.000000000e+00");
    assert_eq!(rows[0][1], "1.000000000e+00");
    assert_eq!(rows[49][0], "2.000000000e+00");
    let text = fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
}

#[test]
fn csv_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(
        dir.path(),
        "f.csv",
        &["sweep-fidelity", "--nbar-range", "0.05:1.5:7"],
    );
    assert!(out.status.success());
    let (_, rows) = read_csv(&path).unwrap();
    let amps = PhysicalAmplitudes::showcase();
    for row in rows {
        let n_bar = parse(&row[0]);
        let p = bogoliubov_factors(n_bar).unwrap();
        let t = Truncation::auto(&p, 1e-10).unwrap();
        let f = fidelity_numeric(&amps, &p, &t).unwrap();
        assert!((parse(&row[1]) - f).abs() < 1e-9);
    }
}

#[test]
fn mandel_sweep_regimes() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(
        dir.path(),
        "m.csv",
        &["sweep-mandel", "--nbar-range", "0:1:41"],
    );
    assert!(out.status.success());
    let (header, rows) = read_csv(&path).unwrap();
    assert_eq!(
        header,
        [
            "n_bar",
            "q_numeric",
            "q_closed_form",
            "discrepancy",
            "regime"
        ]
    );
    assert_eq!(rows[0][1], "-4.500000000e-01");
    let regimes: Vec<&str> = rows.iter().map(|r| r[4].as_str()).collect();
    let changes = regimes.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(changes, 1);
    assert_eq!(regimes[0], "sub");
    assert_eq!(regimes[40], "super");

    let amps = PhysicalAmplitudes::showcase();
    let p = bogoliubov_factors(parse(&rows[20][0])).unwrap();
    let q = mandel_numeric(&amps, &p, &Truncation::auto(&p, 1e-10).unwrap()).unwrap();
    assert!((parse(&rows[20][1]) - q).abs() < 1e-9);
}

#[test]
fn vacuum_mandel_is_undefined() {
    let out = run(&["sweep-mandel", "--amps", "1,0,0,0", "--nbar-range", "0:1:3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().nth(1).unwrap();
    assert_eq!(first, "0.000000000e+00,nan,nan,nan,undefined");
    assert!(text.lines().nth(2).unwrap().ends_with(",super"));
}

#[test]
fn json_format() {
    let out = run(&["sweep-mandel", "--nbar-range", "0:1:3", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["regime"], "sub");
    assert!((rows[0]["q_numeric"].as_f64().unwrap() + 0.45).abs() < 1e-9);
}

#[test]
fn unnormalized_amplitudes_warn() {
    let out = run(&[
        "sweep-fidelity",
        "--amps",
        "1,1,0,0",
        "--nbar-range",
        "0:1:2",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalized"));
    let out = run(&[
        "sweep-fidelity",
        "--amps",
        "0.2,0.3,0.6,0.714142842854285",
        "--nbar-range",
        "0:1:2",
    ]);
    assert!(out.status.success());
    assert!(!String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn complex_amplitudes_are_accepted() {
    let out = run(&[
        "sweep-fidelity",
        "--amps",
        "0.2,0,0,0.3,0.6,0,0.714142842854285,0",
        "--nbar-range",
        "0:0.5:3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("0.000000000e+00,1.000000000e+00"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# sweep settings\nnbar-range = 0:1:4\nformat = csv\n").unwrap();
    let out = bin()
        .arg("sweep-fidelity")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 5);

    let out = bin()
        .args(["sweep-fidelity", "--nbar-range", "0:1:6", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 7);

    fs::write(&cfg, "colour = blue\n").unwrap();
    let out = bin()
        .arg("sweep-fidelity")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn invalid_input_is_rejected() {
    for args in [
        vec!["sweep-fidelity", "--nbar-range", "0:1:1"],
        vec!["sweep-fidelity", "--nbar-range", "-1:1:5"],
        vec!["sweep-fidelity", "--amps", "1,2"],
        vec!["sweep-fidelity", "--cutoff", "many"],
        vec!["sweep-fidelity", "--format", "xml"],
        vec!["wigner-grid", "--grid", "1:-1:5,0:1:5"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn fixed_cutoff_too_small_fails() {
    let out = run(&["sweep-fidelity", "--cutoff", "10", "--nbar-range", "0:2:3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("too small"));
}

#[test]
fn unwritable_output_fails() {
    let out = run(&[
        "sweep-fidelity",
        "--out",
        "/nonexistent/dir/f.csv",
        "--nbar-range",
        "0:1:2",
    ]);
    assert!(!out.status.success());
}

#[test]
fn thread_count_from_environment() {
    let out = bin()
        .args(["sweep-fidelity", "--nbar-range", "0:1:4"])
        .env("THERMOQUBIT_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let base = run(&["sweep-fidelity", "--nbar-range", "0:1:4"]);
    assert_eq!(out.stdout, base.stdout);

    let out = bin()
        .args(["sweep-fidelity", "--nbar-range", "0:1:4"])
        .env("THERMOQUBIT_THREADS", "lots")
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn wigner_grid_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(
        dir.path(),
        "w.csv",
        &["wigner-grid", "--grid", "-8:8:129,-8:8:129"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(!path.exists());
    let cold_csv = dir.path().join("w_nbar0.1.csv");
    let cold: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("w_nbar0.1.json")).unwrap())
            .unwrap();
    let hot: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("w_nbar10.json")).unwrap())
            .unwrap();

    let (header, rows) = read_csv(&cold_csv).unwrap();
    assert_eq!(header, ["q", "p", "w_numeric", "w_closed_form"]);
    assert_eq!(rows.len(), 129 * 129);
    assert_eq!(rows[0][0], "-8.000000000e+00");
    assert_eq!(rows[1][1], "-7.875000000e+00");

    assert!((cold["integrated_total"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((hot["integrated_total"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(hot["grid"]["widened"], true);
    let neg_cold = cold["negativity_volume"].as_f64().unwrap();
    let neg_hot = hot["negativity_volume"].as_f64().unwrap();
    assert!(neg_cold > 0.0 && neg_hot < neg_cold);
    assert!(
        (cold["normalization_constant"].as_f64().unwrap() - 1.0 / (2.0 * std::f64::consts::PI))
            .abs()
            < 1e-15
    );
    assert!(cold["max_discrepancy"].is_number());
}

#[test]
fn wigner_single_temperature_json() {
    let dir = tempfile::tempdir().unwrap();
    let (out, _) = run_to(
        dir.path(),
        "w.json",
        &[
            "wigner-grid",
            "--nbar",
            "0.3",
            "--grid",
            "-0.5:0.5:5,-0.5:0.5:5",
            "--format",
            "json",
        ],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalization"));

    let (out, path2) = run_to(
        dir.path(),
        "w2.json",
        &[
            "wigner-grid",
            "--nbar",
            "0.3",
            "--grid",
            "-8:8:101,-8:8:101",
            "--format",
            "json",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_str(&fs::read_to_string(path2).unwrap()).unwrap();
    assert_eq!(doc["points"].as_array().unwrap().len(), 101 * 101);
    assert_eq!(doc["metadata"]["n_bar"], 0.3);
}

#[test]
fn wigner_complex_amplitudes_have_no_closed_form() {
    let out = bin()
        .args([
            "wigner-grid",
            "--nbar",
            "0.1",
            "--amps",
            "0,0.2,0.3,0,0.6,0,0.714142842854285,0",
            "--grid",
            "-8:8:65,-8:8:65",
        ])
        .arg("--out")
        .arg(std::env::temp_dir().join(format!("tq_complex_{}.csv", std::process::id())))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = std::env::temp_dir().join(format!("tq_complex_{}.csv", std::process::id()));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",nan"));
    let side: Value =
        serde_json::from_str(&fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
    assert_eq!(side["max_discrepancy"], Value::Null);
    fs::remove_file(&path).ok();
    fs::remove_file(path.with_extension("json")).ok();
}

#[test]
fn verify_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = run_to(dir.path(), "v.json", &["verify"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    let checks = report["checks"].as_array().unwrap();
    let gate = checks
        .iter()
        .find(|c| c["name"] == "tfd.gate_thermalization_residual" && c["n_bar"] == 0.2)
        .unwrap();
    assert!(gate["value"].as_f64().unwrap() < 1e-8);
    for name in [
        "tfd.expansion_vs_operator",
        "tfd.expansion_vs_doubled",
        "tfd.operator_vs_doubled",
    ] {
        assert!(checks
            .iter()
            .any(|c| c["name"] == name && c["status"] == "pass"));
    }
}
