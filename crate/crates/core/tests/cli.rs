mod common;

use std::process::{Command, Output};

use serde_json::Value;
use sls::{parse_rational, Rational};

fn sls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sls")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn decide(form: &str, scheme: &str, extra: &[&str]) -> Output {
    let mut args = vec!["decide", "--vars", "x,y,z", "--form", form, "--scheme", scheme];
    args.extend_from_slice(extra);
    sls(&args)
}

#[test]
fn psd_text_output() {
    let o = decide(common::EXAMPLE1, "wds", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PSD at depth 3");
    let o = decide(common::EXAMPLE1, "trisection3", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PSD at depth 2");
}

#[test]
fn indefinite_text_output() {
    let o = decide("x^2 - 3*x*y + y^2 + z^2", "wds", &[]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("INDEFINITE at depth"), "{text}");
    assert!(text.contains("point: x = "));
    assert!(text.contains("value: -"));
}

#[test]
fn inconclusive_exit_code_and_note() {
    let o = decide(common::CENTRAL_FORM, "central3", &["--max-depth", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("PSD-but-not-PD"));
}

#[test]
fn json_rationals_round_trip() {
    let f = "x^2 - 3*x*y + y^2 + z^2";
    let o = decide(f, "midpoint3", &["--output", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "indefinite");
    let point: Vec<Rational> = v["witness"]["point"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| parse_rational(x.as_str().unwrap()).unwrap())
        .collect();
    let value = parse_rational(v["witness"]["value"].as_str().unwrap()).unwrap();
    assert_eq!(common::form(f).evaluate(&point).unwrap(), value);

    let path: Vec<usize> = v["witness"]["path"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    let lib = sls::decide(&common::form(f), &sls::subdivision::make_midpoint3_scheme(), 30).unwrap();
    assert_eq!(lib.witness().unwrap().path, path);
    assert_eq!(lib.witness().unwrap().point, point);
}

#[test]
fn json_for_psd_and_inconclusive() {
    let o = decide(common::EXAMPLE1, "wds", &["--output", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "psd");
    assert_eq!(v["depth_reached"], 3);
    assert!(v.get("witness").is_none());
    let o = decide(common::CENTRAL_FORM, "central3", &["--output", "json", "--max-depth", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "inconclusive");
    assert!(v["note"].is_string());
    assert_eq!(v["stats"]["levels"].as_array().unwrap().len(), 3);
}

#[test]
fn trace_goes_to_stderr() {
    let o = decide(common::EXAMPLE1, "wds", &["--trace"]);
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 3);
    assert!(err.starts_with("depth 1: expanded 6"));
    assert_eq!(stdout(&o).trim(), "PSD at depth 3");
}

#[test]
fn input_errors_exit_above_two() {
    let o = sls(&["decide", "--vars", "x,y", "--form", "x^2 + x"]);
    assert!(o.status.code().unwrap() > 2);
    assert!(stderr(&o).contains("not homogeneous"));

    let o = sls(&["decide", "--vars", "x,y", "--form", "x^2 + q"]);
    assert!(o.status.code().unwrap() > 2);
    assert!(stderr(&o).contains("unknown variable"));

    let o = decide("x^2", "midpoint3", &[]);
    assert_eq!(o.status.code(), Some(0));
    let o = sls(&["decide", "--vars", "x,y", "--form", "x^2-y^2", "--scheme", "midpoint3"]);
    assert!(o.status.code().unwrap() > 2);
    assert!(stderr(&o).contains("dimension"));

    let o = sls(&["decide", "--vars", "x,y,z", "--form", "x", "--scheme", "nope"]);
    assert!(o.status.code().unwrap() > 2);

    let o = sls(&["decide", "--vars", "x,y,z", "--form", "x - x"]);
    assert!(o.status.code().unwrap() > 2);
    assert!(stderr(&o).contains("zero"));

    let o = sls(&["decide", "--form", "x"]);
    assert!(o.status.code().unwrap() > 2);
}

#[test]
fn analyze_builtins() {
    let o = sls(&["analyze-scheme", "--scheme", "central3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NOT convergent; shared edge in matrix 1 (columns 1,2)"));

    let o = sls(&["analyze-scheme", "--scheme", "wds", "--n", "4"]);
    let text = stdout(&o);
    assert!(text.contains("24 matrices"));
    assert!(text.contains("sum |det| = 1\n"));
    assert!(text.contains("convergent; contraction_ratio_sq = 3/8"));
    assert!(!text.contains("NOT"));

    let o = sls(&["analyze-scheme", "--scheme", "midpoint3"]);
    assert!(stdout(&o).contains("contraction_ratio_sq = 1/4"));
}

#[test]
fn analyze_reports_bad_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scheme");
    std::fs::write(&path, "name = bad\nn = 2\nmatrices\n2 1/2\n0 1/2\n\n0 1/2\n1 1/2\n").unwrap();
    let o = sls(&["analyze-scheme", "--file", path.to_str().unwrap()]);
    assert!(o.status.code().unwrap() > 2);
    let text = stdout(&o);
    assert!(text.contains("matrix 1: "));
    assert!(text.contains("column 1 sums to 2"), "{text}");
    assert!(text.contains("validation FAILED"));

    let o = sls(&["decide", "--vars", "x,y", "--form", "x*y", "--scheme", &format!("file:{}", path.display())]);
    assert!(o.status.code().unwrap() > 2);
    assert!(stderr(&o).contains("invalid scheme"));
}

#[test]
fn generated_scheme_file_drives_decide() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.scheme");
    let o = sls(&["gen-scheme", "--scheme", "trisection3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let sel = format!("file:{}", path.display());
    let o = decide(common::EXAMPLE1, &sel, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PSD at depth 2");
    let o = sls(&["analyze-scheme", "--scheme", &sel]);
    assert!(stdout(&o).contains("9 matrices"));
}

#[test]
fn sample_reports_grid_minimum() {
    let o = sls(&["sample", "--vars", "x,y,z", "--form", common::EXAMPLE2, "--denominator", "24"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("negative_found: true"));

    let o = sls(&["sample", "--vars", "x,y,z", "--form", "x^2+y^2+z^2", "--denominator", "8"]);
    let text = stdout(&o);
    // 64 * min over a+b+c = 8 of a^2+b^2+c^2 is 22 at (3,3,2) and permutations
    assert!(text.contains("min: 11/32"), "{text}");
    assert!(text.contains("points: 45"));

    let o = sls(&["sample", "--vars", "x,y,z", "--form", "x*y - z^2", "--denominator", "1"]);
    assert!(stdout(&o).contains("points: 3"));
    assert!(stdout(&o).contains("argmin: (0, 0, 1)"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(sls(&["--help"]).status.code(), Some(0));
    assert_eq!(sls(&["decide", "--help"]).status.code(), Some(0));
}
