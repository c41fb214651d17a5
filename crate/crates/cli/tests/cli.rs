use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kerrgate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerrgate")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn gate_point() {
    let v = json(&kerrgate(&["gate", "--kappa-ratio", "0.99", "--eta-norm", "2.2"]));
    let f = v["F_G"].as_f64().unwrap();
    assert!((f - 0.98).abs() <= 0.02, "{f}");
    assert_eq!(v["estimator"], "pure_choi");
    assert!(v["theta_mu_over_2pi"].as_f64().unwrap() > 2.0);
}

#[test]
fn gate_corrected_reports_corrected_fidelity() {
    let v = json(&kerrgate(&["gate", "--kappa-ratio", "0.99", "--eta-norm", "2.2", "--correct-backaction"]));
    assert_eq!(v["F_G"], v["F_G_corrected"]);
    assert_eq!(v["correct_backaction"], true);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["gate", "--kappa-ratio", "1.5"][..],
        &["gate", "--estimator", "choi"],
        &["gate", "--kappa-ratio", "0.9", "--kappa-io-ratio", "0.01"],
        &["gate", "--sweep", "eta-alpha:2:3:0.1"],
        &["gate", "--sweep", "kappa:0.5:1:0.1", "--kappa-ratio", "0.9"],
        &["entangle", "--formula", "exact"],
        &["feasibility", "other"],
        &["sweep", "fig4a", "--estimator", "avg_output"],
        &[],
    ] {
        assert_eq!(code(&kerrgate(args)), 2, "{args:?}");
    }
}

#[test]
fn consistent_intrinsic_loss_is_accepted() {
    let a = json(&kerrgate(&["gate", "--kappa-io-ratio", "0.05"]));
    let b = json(&kerrgate(&["gate", "--kappa-ratio", "0.95", "--kappa-io-ratio", "0.05"]));
    assert_eq!(a["F_G"], b["F_G"]);
    assert_eq!(a["kappa_ratio"], 0.95);
}

#[test]
fn numerical_failure_exits_3() {
    // A pulse so broad that the linewidth-scale resonance is unresolved.
    let out = kerrgate(&["gate", "--sigma-omega", "1e6"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn vacuum_entanglement() {
    let v = json(&kerrgate(&["entangle", "--alpha", "0", "--kappa-ratio", "0.99", "--eta-alpha", "4.21"]));
    assert_eq!(v["F_ent"], 1.0);
    assert_eq!(v["theta_over_2pi"], 0.0);
    assert_eq!(v["p_plus"], 1.0);
}

#[test]
fn entangle_point() {
    let v = json(&kerrgate(&["entangle", "--kappa-ratio", "0.99", "--eta-alpha", "4.21"]));
    assert!((v["F_ent"].as_f64().unwrap() - 0.89).abs() <= 0.03);
    assert!((v["theta_over_2pi"].as_f64().unwrap() - 4.05).abs() <= 0.05);
}

fn csv_lines(out: &Output) -> Vec<String> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap().lines().map(String::from).collect()
}

#[test]
fn kitten_columns() {
    let plain = csv_lines(&kerrgate(&["entangle", "--sweep", "eta-alpha:3:3.2:0.1"]));
    let kitten = csv_lines(&kerrgate(&["entangle", "--sweep", "eta-alpha:3:3.2:0.1", "--kitten"]));
    assert_eq!(plain.len(), 2 + 3);
    assert_eq!(
        plain[0],
        "x_name,x_value,theta_over_2pi,theta_rel_over_2pi,F_ent_paper_literal,F_ent_multimode,p_plus,F_kitten_plus"
    );
    assert!(kitten[0].ends_with(",p_minus,F_kitten_minus"));
    assert!(plain[1].split(',').all(|u| ["label", "dimensionless", "radians_over_2pi"].contains(&u)));
    assert!(kitten[2].starts_with("eta_norm_alpha,3,"));
}

#[test]
fn fig3_table_shape() {
    let lines = csv_lines(&kerrgate(&["sweep", "fig3"]));
    assert_eq!(lines.len(), 2 + 2 * 101);
    assert_eq!(lines[0], "kappa_ratio,eta_norm,F_G,D_G,F_G_corrected,success_trace,theta_mu_over_2pi,estimator");
    assert_eq!(
        lines[1],
        "dimensionless,dimensionless,dimensionless,dimensionless,dimensionless,dimensionless,radians_over_2pi,label"
    );
    assert!(lines[2].starts_with("0.5,2.2,"));
    assert!(lines[2 + 101].starts_with("0.5,4.2,"));
}

#[test]
fn empty_range_is_one_point() {
    let lines = csv_lines(&kerrgate(&["gate", "--sweep", "kappa:0.9:0.9:0.1"]));
    assert_eq!(lines.len(), 3);
}

fn replay(dir: &Path, args: &[&str]) {
    let first = dir.join("a.csv");
    let second = dir.join("b.csv");
    let mut a: Vec<&str> = args.to_vec();
    let first_s = first.to_str().unwrap();
    a.extend(["--threads", "1", "--out", first_s]);
    assert!(kerrgate(&a).status.success());
    let manifest = dir.join("a.csv.manifest.json");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert!(m["job"]["config"]["quad"]["nodes"].as_u64().is_some());
    let out = kerrgate(&["--manifest", manifest.to_str().unwrap(), "--threads", "3", "--out", second.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    replay(dir.path(), &["gate", "--sweep", "kappa:0.5:1.0:0.05", "--eta-norm", "4.2", "--estimator", "leakage_resolved"]);
    replay(dir.path(), &["entangle", "--sweep", "eta-alpha:2:4:0.25", "--kitten", "--sigma-omega", "0.1"]);
}

#[test]
fn manifest_without_out_reuses_recorded_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    assert!(kerrgate(&["gate", "--out", out.to_str().unwrap()]).status.success());
    let before = std::fs::read(&out).unwrap();
    std::fs::remove_file(&out).unwrap();
    let manifest = dir.path().join("t.csv.manifest.json");
    assert!(kerrgate(&["--manifest", manifest.to_str().unwrap()]).status.success());
    assert_eq!(before, std::fs::read(&out).unwrap());
}

#[test]
fn manifest_and_subcommand_conflict() {
    assert_eq!(code(&kerrgate(&["gate", "--manifest", "x.json"])), 2);
    assert_eq!(code(&kerrgate(&["--manifest", "/nonexistent/m.json"])), 1);
}

#[test]
fn config_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(
        &good,
        r#"
[cavity]
kappa_o = { value = 10.0, unit = "MHz" }
kappa_eo = { value = 0.99, unit = "kappa_o_units" }

[kerr]
eta_norm = 2.2

[pulse]
sigma_t = { value = 5.0, unit = "inverse_kappa_o" }
"#,
    )
    .unwrap();
    let from_file = json(&kerrgate(&["gate", "--config", good.to_str().unwrap()]));
    let from_flags = json(&kerrgate(&["gate", "--kappa-ratio", "0.99", "--eta-norm", "2.2"]));
    assert_eq!(from_file["F_G"], from_flags["F_G"]);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[cavity]\nkappa_o = 10.0\nkappa_eo = 0.99\n").unwrap();
    let out = kerrgate(&["gate", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("has no unit"));
}

#[test]
fn feasibility_reports() {
    let nv = json(&kerrgate(&["feasibility", "nv"]));
    assert_eq!(nv["eta_norm_claimed"], 2.2);
    assert!(nv["eta_norm_literal"].as_f64().unwrap() > 0.0);
    let cs = json(&kerrgate(&["feasibility", "cs"]));
    assert_eq!(cs["n_atoms"], 6900.0);
    assert_eq!(cs["claimed_F_G"], 0.98);
    assert_eq!(cs["discrepancy_flagged"], true);
}
