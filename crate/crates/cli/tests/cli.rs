use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qserre"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quintic_report_passes() {
    let o = run(&["quintic-report", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let gw = v["sections"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["title"] == "gromov-witten invariants")
        .unwrap();
    assert_eq!(gw["entries"][0]["value"], "-650");
    assert_eq!(gw["entries"][7]["value"], "-1260949629604284268280625/4");
}

#[test]
fn low_order_truncates_table() {
    let o = run(&["mirror-maps", "--order", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("value,gromov-witten invariants,"))
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].contains(",1,-650,"));
    assert!(rows[1].contains(",2,-160625,"));
    assert!(rows[2].contains("truncated"));
}

#[test]
fn json_output_is_stable() {
    let a = stdout(&run(&["operators", "--format", "json"]));
    let b = stdout(&run(&["operators", "--format", "json"]));
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["quintic-report", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suites", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["matrices", "--sigma", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_small_case() {
    let o = run(&["verify", "--n", "2", "--order", "6", "--worder", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("Overall: PASS"));
}

#[test]
fn matrices_json_lists_coefficients() {
    let o = run(&["matrices", "--sigma", "-5/2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let den = v["data"]["a_t"]["den"].as_array().unwrap();
    assert!(!den.is_empty());
    assert_eq!(den[0].as_array().unwrap().len(), 3);
}

#[test]
fn imported_algebra_round_trip() {
    let dir = std::env::temp_dir().join(format!("qserre-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let alg = qserre::coh_algebra::AlgebraPresentation::projective_space(4).unwrap();
    let data = qserre::givental::extract_descendants(4, 4).unwrap();
    let ap = dir.join("alg.json");
    let dp = dir.join("desc.json");
    std::fs::write(&ap, alg.to_json()).unwrap();
    std::fs::write(&dp, data.to_json()).unwrap();
    let o = run(&[
        "mirror-maps",
        "--algebra",
        ap.to_str().unwrap(),
        "--descendants",
        dp.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains(",1,-650,"));
    std::fs::remove_dir_all(&dir).ok();
}
