use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use germsum_core::json::{series_from_json, series_to_json};
use serde_json::Value;

fn germsum(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_germsum"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(s) = stdin {
        pipe.write_all(s.as_bytes()).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn generated(name: &str, trunc: &str) -> PathBuf {
    let out = germsum(&["gen", name, "--trunc", trunc], None);
    let file = format!("{name}-{trunc}.json");
    scratch(&file, std::str::from_utf8(&out.stdout).unwrap())
}

#[test]
fn series_output_parses_back_to_itself() {
    let input = r#"{"dim": 2, "trunc": 6, "terms": [
        {"exp": [2, 0], "coeff": "3/4"}, {"exp": [0, 1], "coeff": "1+2i"}, {"exp": [9, 0], "coeff": "5"}]}"#;
    let once = json_of(&germsum(&["blowup", "--xi", "0"], Some(input)));
    assert_eq!(once["trunc"], 6);
    let parsed = series_from_json(&once, 128, "$").unwrap();
    assert_eq!(series_to_json(&parsed), once);
    let up = json_of(&germsum(&["ramify", "--k", "2"], Some(&once.to_string())));
    let down = json_of(&germsum(&["ramify", "--k", "2", "--inverse"], Some(&up.to_string())));
    assert_eq!(down["descended"]["terms"], once["terms"]);
    assert_eq!(down["descended"]["trunc"], 3);
}

#[test]
fn expansion_of_a_generated_example() {
    let g = generated("remark79", "12");
    let g = g.to_str().unwrap();
    let v = json_of(&germsum(&["expand", "--germ", g, "--depth", "4", g], None));
    let coeffs = v["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 4);
    let round = json_of(&germsum(&["tmap", "--inverse"], Some(&v.to_string())));
    let div = json_of(&germsum(&["divide", "--germ", g, g], None));
    assert!(div["q"].is_object() && div["r"].is_object());
    assert!(round["terms"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn infinite_chart() {
    let input = r#"{"dim": 2, "trunc": null, "terms": [{"exp": [2, 0], "coeff": "1"}, {"exp": [0, 3], "coeff": "1"}]}"#;
    let v = json_of(&germsum(&["blowup", "--xi", "inf"], Some(input)));
    assert_eq!(v["trunc"], Value::Null);
    let exps: Vec<&Value> = v["terms"].as_array().unwrap().iter().map(|t| &t["exp"]).collect();
    assert!(exps.contains(&&serde_json::json!([2, 2])));
    assert!(exps.contains(&&serde_json::json!([0, 3])));
}

#[test]
fn built_in_verifications_pass() {
    for name in ["remark79", "ode-euler", "pde-quasihom"] {
        let v = json_of(&germsum(&["verify", name], None));
        assert_eq!(v["pass"], true, "{name}: {v}");
    }
}

#[test]
fn euler_coefficient_list_sum() {
    let coeffs: Vec<String> = (0..32u32)
        .scan(1f64, |f, n| {
            if n > 0 {
                *f *= -(n as f64);
            }
            Some(format!("\"{}\"", f))
        })
        .collect();
    let input = format!("{{\"coefficients\": [{}]}}", coeffs.join(","));
    let v = json_of(&germsum(&["borel-sum", "--t", "0.1"], Some(&input)));
    assert!(v.get("value").is_some());
    let out = germsum(&["borel-sum", "--t", "0.1", "--theta", "3.14159265"], Some(&input));
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let out = germsum(&["blowup", "--xi", "0"], Some("{\"dim\": 2, \"trunc\": 3,"));
    assert_eq!(out.status.code(), Some(2));
    let out = germsum(&["blowup", "--xi", "0"], Some(r#"{"dim": 2, "trunc": 3, "terms": [{"exp": [1, 0]}]}"#));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.terms[0]"));
    let out = germsum(&["gen", "heat"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = germsum(&["frobnicate"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_germ_is_a_usage_error() {
    let g = generated("ode-euler", "8");
    let out = germsum(&["expand", g.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}
