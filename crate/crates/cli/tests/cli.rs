use std::f64::consts::E;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jordan_entropy::element::{parse_element_json, JordanElement};
use jordan_entropy::harness::order::loewner_leq;
use jordan_entropy::harness::report::ChainReport;
use jordan_entropy::spectral::{power, spectrum};
use serde_json::Value;
use tempfile::TempDir;

fn je(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_je"))
        .args(args)
        .env("JE_THREADS", "0")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn scalar_file(dir: &Path, name: &str, v: f64) -> String {
    let path = dir.join(name);
    fs::write(&path, format!(r#"{{"algebra":"sym","dim":1,"coords":[{v:?}]}}"#)).unwrap();
    path.to_str().unwrap().to_string()
}

fn result_coords(o: &Output) -> Vec<f64> {
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    serde_json::from_value(v["result"]["coords"].clone()).unwrap()
}

fn fixture_element(path: &Path, key: &str) -> JordanElement {
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    serde_json::from_value(v["elements"][key].clone()).unwrap()
}

#[test]
fn compute_relative_entropy_of_equal_operands_is_zero() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("a.json");
    fs::write(&path, r#"{"matrix": [[2.0, 0.5], [0.5, 1.0]]}"#).unwrap();
    let a = path.to_str().unwrap();
    let o = je(&["compute", "S", "-a", a, "-b", a]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(result_coords(&o).iter().all(|c| c.abs() < 1e-14));
}

#[test]
fn compute_geometric_mean_of_scalars() {
    let dir = TempDir::new().unwrap();
    let a = scalar_file(dir.path(), "a.json", 1.0);
    let b = scalar_file(dir.path(), "b.json", 9.0);
    let o = je(&["compute", "geo", "-a", &a, "-b", &b, "--lambda", "0.5"]);
    assert_eq!(code(&o), 0);
    assert!((result_coords(&o)[0] - 3.0).abs() < 1e-14);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["spectrum"]["values"][0].as_f64().unwrap(), result_coords(&o)[0]);
}

#[test]
fn compute_bound_v_scalar_instance() {
    let dir = TempDir::new().unwrap();
    let a = scalar_file(dir.path(), "a.json", 1.0);
    let b = scalar_file(dir.path(), "b.json", E * E);
    let out = dir.path().join("v.json");
    let o = je(&["compute", "bound:V", "-a", &a, "-b", &b, "--alpha", "0", "--beta", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let got = v["result"]["coords"][0].as_f64().unwrap();
    let want = 0.5 * (E * E - E.powi(-2));
    assert!((got - want).abs() < 1e-13 * want, "{got} vs {want}");
}

#[test]
fn compute_domain_error_exits_2_with_structured_error() {
    let dir = TempDir::new().unwrap();
    let a = scalar_file(dir.path(), "a.json", -1.0);
    let b = scalar_file(dir.path(), "b.json", 2.0);
    let o = je(&["compute", "S", "-a", &a, "-b", &b]);
    assert_eq!(code(&o), 2);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "not-positive");
}

#[test]
fn compute_unknown_expression_exits_4() {
    let dir = TempDir::new().unwrap();
    let a = scalar_file(dir.path(), "a.json", 1.0);
    assert_eq!(code(&je(&["compute", "nonsense", "-a", &a, "-b", &a])), 4);
}

#[test]
fn verify_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = je(&["verify", "thm4.6i", "--backend", "sym", "--dim", "3", "--trials", "1", "--seed", "7", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        fs::read(out.join("thm4.6i_sym3.json")).unwrap()
    };
    assert_eq!(run("one"), run("two"));
}

#[test]
fn verify_unknown_id_exits_4() {
    let o = je(&["verify", "unknown-id"]);
    assert_eq!(code(&o), 4);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "unknown-id");
}

#[test]
fn verify_summary_and_control() {
    let o = je(&["verify", "cor4.7i", "--backend", "spin", "--dim", "2", "--trials", "40"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("theorem_id,backend,dim,trials,worst_margin,verdict\n"));
    assert!(text.contains("cor4.7i,spin,2,40,"));
    let o = je(&["verify", "cor4.7i", "--backend", "spin", "--dim", "2", "--trials", "40", "--control", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows[0]["verdict"], "control-detected");
}

#[test]
fn verify_bad_parameter_exits_2() {
    let o = je(&["verify", "thm4.9i", "--backend", "sym", "--trials", "4", "--lambda", "1.5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn gen_positive_respects_condition_number() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("p.json");
    let o = je(&["gen", "positive", "--backend", "sym", "--dim", "4", "--cond", "10", "--seed", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let x = fixture_element(&out, "A");
    let sp = spectrum(&x).unwrap();
    assert!(sp.min() > 0.0);
    assert!(sp.max() / sp.min() <= 10.0 * (1.0 + 1e-12));
}

#[test]
fn gen_pair_satisfies_hypothesis_and_feeds_compute() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("pair.json");
    let o = je(&["gen", "pair", "--backend", "albert", "--hypothesis", "A^b<=B", "--beta", "0.5", "--seed", "9", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let a = fixture_element(&out, "A");
    let b = fixture_element(&out, "B");
    assert!(loewner_leq(&power(&a, 0.5).unwrap(), &b, 1e-10).unwrap().verdict);
    let o = je(&["compute", "S", "--pair", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn gen_is_reproducible_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let files: Vec<_> = ["a.json", "b.json"]
        .iter()
        .map(|n| {
            let p = dir.path().join(n);
            je(&["gen", "pair", "--backend", "spin", "--dim", "3", "--seed", "11", "--out", p.to_str().unwrap()]);
            fs::read_to_string(p).unwrap()
        })
        .collect();
    assert_eq!(files[0], files[1]);
    let v: Value = serde_json::from_str(&files[0]).unwrap();
    let text = serde_json::to_string(&v["elements"]["A"]).unwrap();
    let x = parse_element_json(&text).unwrap();
    let again = parse_element_json(&serde_json::to_string(&x).unwrap()).unwrap();
    assert_eq!(x.coords(), again.coords());
    let original: Vec<f64> = serde_json::from_value(v["elements"]["A"]["coords"].clone()).unwrap();
    assert!(original.iter().zip(x.coords()).all(|(p, q)| p.to_bits() == q.to_bits()));
}

#[test]
fn report_on_empty_directory() {
    let dir = TempDir::new().unwrap();
    let o = je(&["report", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1);
}

#[test]
fn report_mirrors_verify_exit_convention() {
    let dir = TempDir::new().unwrap();
    let o = je(&["verify", "prop4.3i", "--backend", "sym", "--dim", "2", "--trials", "8", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = je(&["report", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().ends_with(",pass"));

    let path = dir.path().join("prop4.3i_sym2.json");
    let mut failing = ChainReport::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    failing.theorem_id = "prop4.3ii".into();
    failing.links[0].worst_margin = -1.0;
    failing.violation_count = 1;
    failing.passed = false;
    fs::write(dir.path().join("prop4.3ii_sym2.json"), failing.to_json()).unwrap();
    let o = je(&["report", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
}

#[test]
fn report_names_malformed_file() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("broken.json"), "{ not a report").unwrap();
    let o = je(&["report", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.json"));
}
