use std::process::{Command, Output};

fn oisl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oisl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn channel_header_has_units() {
    let out = oisl(&["channel", "--f-points", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "f_THz,z_km,sigma_s_m,mean_h_pe_analytic,capture_probability"
    );
    assert_eq!(lines.count(), 2);
    assert!(!text.contains('\r'));
}

#[test]
fn monte_carlo_columns_only_on_request() {
    let out = oisl(&["channel", "--f-points", "2", "--mc", "20000"]);
    let header = stdout(&out).lines().next().unwrap().to_string();
    assert!(header.contains("mean_h_pe_mc") && header.contains("capture_probability_mc"));
}

#[test]
fn flags_override_config_file_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"distances_km": [2000], "f_points": 3, "sigma_s0": 3.0}"#).unwrap();
    let path = cfg.to_str().unwrap();

    let text = stdout(&oisl(&["channel", "--config", path]));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("5.00000000e1,2.00000000e3,3.00000000e0,"));

    let text = stdout(&oisl(&["channel", "--config", path, "--distance-km", "500", "--f-points", "2"]));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("5.00000000e1,5.00000000e2,3.00000000e0,"));
}

#[test]
fn unknown_config_key_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"p_T": 1.0}"#).unwrap();
    let out = oisl(&["rate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_parameter_exits_two() {
    assert_eq!(oisl(&["rate", "--sigma-s0", "-1"]).status.code(), Some(2));
    assert_eq!(oisl(&["channel", "--f-min", "500", "--f-max", "100"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let out = oisl(&["channel", "--f-points", "2", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out.csv"));
}

#[test]
fn perturbed_validation_fails_with_exit_one() {
    let out = oisl(&["validate", "--perturb", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).lines().any(|l| l.starts_with("FAIL ")));
}

#[test]
fn loose_budget_plans_direct_link() {
    let out = oisl(&["plan", "--t-th", "1e9", "--N-max", "4"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("min_satellites: N=1 "));
    assert_eq!(stdout(&out).lines().count(), 9);
}
