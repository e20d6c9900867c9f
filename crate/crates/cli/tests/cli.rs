use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const SMOOTH_FIXTURE: [u32; 20] = [37, 38, 39, 39, 23, 21, 22, 20, 21, 23, 22, 20, 23, 22, 22, 22, 15, 14, 13, 14];
const RANDOM: &str = "3x^3 - 2y^3 + z^3 + 5w^3 + x*y*z - 7x^2*w + 4y*z*w + 11z^2*x - 6y^2*w + 2x*y*w";

fn cubic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubic")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = schema().iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cubic-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn fermat_lines() {
    let out = cubic(&["lines", "--poly", "x^3+y^3+z^3+w^3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_valid(&v);
    assert_eq!(v["results"]["count"], 27);
    assert_eq!(v["results"]["real_count"], 3);
}

#[test]
fn cayley_discriminant_is_zero() {
    let out = cubic(&["discriminant", "--poly", "x*y*z+x*y*w+x*z*w+y*z*w"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["results"]["value"], "0");
    assert_eq!(v["results"]["singular"], true);
    assert_eq!(v["residuals"]["value"], "exact");
}

#[test]
fn smooth_fixture_tropical() {
    let coeffs: Vec<String> = SMOOTH_FIXTURE.iter().map(|h| (1u64 << h).to_string()).collect();
    let file = tmp("smooth.json", &serde_json::to_string(&coeffs).unwrap());
    let out = cubic(&["tropical", "--coeffs", file.to_str().unwrap(), "--prime", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_valid(&v);
    assert_eq!(v["results"]["smooth"], true);
    assert_eq!(v["results"]["cells"], 27);
}

#[test]
fn explicit_valuation_file() {
    let file = tmp("zero.val", &"0 ".repeat(20));
    let v = json_of(&cubic(&["tropical", "--valuation", file.to_str().unwrap()]));
    assert_eq!(v["results"]["smooth"], false);
    assert_eq!(v["results"]["cells"], 1);
}

#[test]
fn named_coefficient_file() {
    let file = tmp("fermat.txt", "x^3 1\ny^3 1\nz^3 1\nw^3 1\n");
    let v = json_of(&cubic(&["discriminant", "--coeffs", file.to_str().unwrap()]));
    assert_eq!(v["results"]["value"], "1853020188851841");
}

#[test]
fn exit_codes() {
    assert_eq!(cubic(&["lines"]).status.code(), Some(1));
    assert_eq!(cubic(&["frobnicate", "--poly", "x^3"]).status.code(), Some(1));
    assert_eq!(cubic(&["lines", "--poly", "x^2*y + z"]).status.code(), Some(1));
    assert_eq!(cubic(&["lines", "--poly", "x^3", "--tol", "-1"]).status.code(), Some(1));
    assert_eq!(cubic(&["--help"]).status.code(), Some(0));
    // Fermat is pentahedral-degenerate: a computation failure with diagnostics.
    let out = cubic(&["pentahedron", "--poly", "x^3+y^3+z^3+w^3"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_valid(&v);
    assert_eq!(v["status"], "failed");
    assert!(v["error"].as_str().unwrap().contains("Hessian nodes"));
    // Combinatorics refuse a singular surface.
    assert_eq!(cubic(&["incidence", "--poly", "x*y*z+x*y*w+x*z*w+y*z*w"]).status.code(), Some(2));
}

#[test]
fn json_output_file_matches_stdout() {
    let out_path = std::env::temp_dir().join(format!("cubic-cli-out-{}.json", std::process::id()));
    let a = cubic(&["eigenpoints", "--poly", RANDOM, "--no-timing", "--json", out_path.to_str().unwrap()]);
    assert!(a.status.success() && a.stdout.is_empty());
    let b = cubic(&["eigenpoints", "--poly", RANDOM, "--no-timing"]);
    assert_eq!(std::fs::read(&out_path).unwrap(), b.stdout);
}

#[test]
fn floats_have_seventeen_significant_digits() {
    let out = cubic(&["eigenpoints", "--poly", RANDOM]);
    let text = String::from_utf8(out.stdout).unwrap();
    let re_float = text
        .split([',', '[', ']', ' ', '\n'])
        .filter(|t| t.contains('e') && t.chars().next().is_some_and(|c| c == '-' || c.is_ascii_digit()));
    let mut n = 0;
    for t in re_float {
        let mantissa = t.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{t}");
        n += 1;
    }
    assert!(n > 0);
}

#[test]
fn report_is_byte_stable_and_valid() {
    let args = ["report", "--poly", RANDOM, "--seed", "7", "--no-timing"];
    let a = cubic(&args);
    let b = cubic(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_valid(&v);
    for (name, section) in v["results"].as_object().unwrap() {
        assert_eq!(section["status"], "ok", "{name}: {section}");
    }
    // With timing the reports agree except for the wall time.
    let mut c = json_of(&cubic(&args[..5]));
    assert!(c["wall_time_seconds"].is_number());
    c.as_object_mut().unwrap().remove("wall_time_seconds");
    assert_eq!(c, v);
}

#[test]
fn singular_report_skips_smooth_only_sections() {
    let out = cubic(&["report", "--poly", "x*y*z+x*y*w+x*z*w+y*z*w", "--no-timing"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_valid(&v);
    for name in ["eckardt", "pentahedron", "cayley_salmon", "brundu_logar"] {
        assert_eq!(v["results"][name]["status"], "skipped");
    }
    assert_eq!(v["results"]["discriminant"]["results"]["singular"], true);
}
