use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn realbun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realbun"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let o = realbun(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn matrix_file(rows: &[&str]) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let body = serde_json::json!({ "size": rows.len(), "rows": rows });
    write!(f, "{body}").unwrap();
    f
}

#[test]
fn classify_reports_type_one_invariants() {
    let v = json_of(&["classify", "--g", "3", "--n", "2", "--a", "0"]);
    assert_eq!(v["type"], "I");
    assert_eq!(v["g_prime"], 1);
    assert_eq!(v["dickson"], 2);
    assert_eq!(v["m_curve"], false);

    let v = json_of(&["classify", "--g", "4", "--n", "0", "--a", "1"]);
    assert_eq!(v["type"], "0");
    assert_eq!(v["dickson"], Value::Null);
}

#[test]
fn invalid_input_exits_one_and_names_the_invariant() {
    let o = realbun(&["classify", "--g", "3", "--n", "5", "--a", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Harnack: n <= g+1"), "{}", stderr(&o));

    for args in [
        &["classify", "--g", "3"][..],
        &["present", "--g-prime", "1", "--n", "1", "--rank", "2", "--cap", "513"],
        &["present", "--g-prime", "1", "--n", "0", "--rank", "2"],
        &["present", "--g-prime", "1", "--n", "2", "--rank", "0"],
        &["series", "--preset", "em", "--rank", "0"],
        &["bogus"],
    ] {
        assert_eq!(realbun(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(realbun(&["--help"]).status.code(), Some(0));
}

#[test]
fn dickson_of_identity_matrix_is_zero() {
    let f = matrix_file(&["1000", "0100", "0010", "0001"]);
    let path = f.path().to_str().unwrap();
    let v = json_of(&["dickson", "--matrix", path]);
    assert_eq!(v["dickson"], 0);
    let o = realbun(&["--format", "text", "dickson", "--matrix", path]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn dickson_paths_agree_or_fail_verification() {
    // type I reflection for (g, n, a) = (2, 1, 0): handles swapped
    let swap = ["0010", "0001", "1000", "0100"];
    let f = matrix_file(&swap);
    let path = f.path().to_str().unwrap();
    let v = json_of(&["dickson", "--g", "2", "--n", "1", "--a", "0", "--matrix", path]);
    assert_eq!(v["dickson"], 2);
    assert_eq!(v["agree"], true);

    let f = matrix_file(&["1000", "0100", "0010", "0001"]);
    let path = f.path().to_str().unwrap();
    let o = realbun(&["dickson", "--g", "2", "--n", "1", "--a", "0", "--matrix", path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("disagree"));
}

#[test]
fn dickson_rejects_bad_matrices() {
    let f = matrix_file(&["110", "011", "001"]);
    let o = realbun(&["dickson", "--matrix", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let f = matrix_file(&["11", "00"]);
    let o = realbun(&["dickson", "--matrix", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("square to the identity"), "{}", stderr(&o));
}

#[test]
fn basis_conjugates_to_normal_form() {
    let f = matrix_file(&["0010", "0001", "1000", "0100"]);
    let v = json_of(&["basis", "--matrix", f.path().to_str().unwrap()]);
    assert_eq!(v["dickson"], 2);
    assert_eq!(v["verified"], true);
    assert_eq!(v["normal_form"]["rows"], serde_json::json!(["1100", "0100", "0011", "0001"]));
    let roles: Vec<&str> = v["roles"].as_array().unwrap().iter().map(|r| r["role"].as_str().unwrap()).collect();
    assert_eq!(roles, ["A", "alpha", "A", "alpha"]);
}

#[test]
fn present_wraps_params_presentation_series_and_checks() {
    let args = ["present", "--g-prime", "1", "--n", "2", "--rank", "3", "--d", "5"];
    let v = json_of(&args);
    assert_eq!(v["params"], serde_json::json!({"g": 3, "n": 2, "a": 0, "g_prime": 1, "r": 3, "d": 5}));
    assert_eq!(v["checks"]["em_matches"], true);
    assert_eq!(v["checks"]["stack_matches"], true);
    assert_eq!(v["poincare"]["truncation"], 40);
    assert_eq!(v["poincare"]["coefficients"][0], 1);
    let gens = v["presentation"]["generators"].as_array().unwrap();
    assert_eq!(gens.iter().filter(|g| g["label"] == "f").count(), 2);

    // byte-stable, and independent of the bundle degree
    assert_eq!(stdout(&realbun(&args)), stdout(&realbun(&args)));
    let other = json_of(&["present", "--g-prime", "1", "--n", "2", "--rank", "3", "--d", "-4"]);
    assert_eq!(other["presentation"]["generators"], v["presentation"]["generators"]);
    assert_eq!(other["poincare"], v["poincare"]);
}

#[test]
fn present_text_uses_tensor_notation() {
    let o = realbun(&["--format", "text", "present", "--g-prime", "1", "--n", "2", "--rank", "1", "--cap", "4"]);
    let text = stdout(&o);
    assert!(text.contains("Z/2[omega^1] (x) /\\[alpha^1_1,alpha^1_2] (x) /\\[beta^1_1]"), "{text}");
    assert!(text.contains("[1, 4, 7, 8, 8] + O(t^5)"), "{text}");
}

#[test]
fn omega_bso_lists_heights_and_generator_set() {
    let v = json_of(&["omega-bso", "--rank", "3", "--cap", "6"]);
    assert_eq!(v["s_set"], serde_json::json!([2]));
    assert_eq!(v["heights"][0]["nu"], 1);
    assert_eq!(v["heights"][0]["exponent"], 4);
    assert_eq!(v["poincare"]["coefficients"], serde_json::json!([1, 1, 1, 1, 0, 0, 0]));
}

#[test]
fn series_presets() {
    let so = json_of(&["series", "--preset", "so", "--rank", "3", "--cap", "4"]);
    assert_eq!(so["coefficients"], serde_json::json!([1, 1, 1, 1, 0]));
    let em = json_of(&["series", "--preset", "em", "--g-prime", "1", "--n", "1", "--rank", "1", "--cap", "5"]);
    assert_eq!(em["coefficients"], serde_json::json!([1, 3, 4, 4, 4, 4]));
    let stack = json_of(&["series", "--preset", "stack", "--g-prime", "1", "--n", "1", "--rank", "1", "--cap", "5"]);
    assert_eq!(stack, em);
}

#[test]
fn check_passes_with_exit_zero() {
    let o = realbun(&["--format", "text", "check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 10, "{text}");
    assert!(!text.contains("[FAIL]"));

    let v = json_of(&["check", "--max-gprime", "1", "--max-n", "2", "--max-rank", "2", "--cap", "12"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
}

#[test]
fn sweep_emits_one_json_line_per_point() {
    let o = realbun(&["sweep", "--max-gprime", "1", "--max-n", "2", "--max-rank", "2", "--cap", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // genus >= 2 leaves (1,1) and (1,2), each at two ranks
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l["checks"]["stack_matches"] == true));
}
