use std::process::{Command, Output};

fn sdrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdrt"))
        .args(args)
        .output()
        .expect("failed to launch sdrt")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_passes() {
    let out = sdrt(&["verify"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("all checks passed"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_is_deterministic() {
    let a = sdrt(&["verify", "--seed", "7"]);
    let b = sdrt(&["verify", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn phi_out_of_range_is_a_usage_error() {
    let out = sdrt(&["converge", "--phi", "2.5", "--h", "0.1", "--tmax", "0.02"]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
}

#[test]
fn non_reciprocal_h_is_a_usage_error() {
    let out = sdrt(&["converge", "--h", "0.3", "--tmax", "0.02"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn short_longtime_is_a_usage_error() {
    let out = sdrt(&["longtime", "--tmax", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coarse_stability_scan_passes_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let pi_over_10 = "0.3141592653589793";
    let out = sdrt(&[
        "stability",
        "--xi-step",
        pi_over_10,
        "--phi-step",
        pi_over_10,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("stability scan passed"), "{text}");
    let summary =
        std::fs::read_to_string(dir.path().join("stability_summary.json")).unwrap();
    assert!(summary.contains("max_cond"), "{summary}");
    let records =
        std::fs::read_to_string(dir.path().join("stability_records.csv")).unwrap();
    assert!(records.starts_with("xi,phi_x,phi_y,min_re_lambda,cond"));
}

#[test]
fn invalid_scan_step_is_a_usage_error() {
    let out = sdrt(&["stability", "--xi-step", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn converge_smoke_reports_orders() {
    let dir = tempfile::tempdir().unwrap();
    let out = sdrt(&[
        "converge",
        "--h",
        "0.1,0.05",
        "--tmax",
        "0.05",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("order"), "{text}");
    assert!(dir.path().join("converge.csv").exists() || text.contains("wrote"), "{text}");
}

#[test]
fn first_order_sanity_mode_runs() {
    let out = sdrt(&["converge", "--p0", "--h", "0.1,0.05", "--tmax", "0.05"]);
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn appendix_prints_the_coefficients() {
    let out = sdrt(&["appendix"]);
    let text = stdout(&out);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("-1/6"), "{text}");
    assert!(text.contains("1/2"), "{text}");
}
