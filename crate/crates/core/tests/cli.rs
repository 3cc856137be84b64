use std::path::{Path, PathBuf};
use std::process::Command;

use bargmann::cli::{run, EXIT_INPUT, EXIT_OK};
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

const IDENTITY: &str = r#"{"dim":2,"A":[[[1,0],[0,0]],[[0,0],[1,0]]],"b":[[0,0],[0,0]]}"#;
const HALF: &str = r#"{"dim":1,"A":[[[0.5,0]]],"b":[[0.5,0]]}"#;
const BOUNDARY_UNBOUNDED: &str = r#"{"dim":2,"A":[[[1,0],[0,0]],[[0,0],[0.5,0]]],"b":[[1,0],[0,0]]}"#;

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bargmann")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = bin(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn identity_is_unitary_with_unit_norm() {
    let f = Files::new();
    let path = f.write("id.json", IDENTITY);
    let r = json(&["classify", p(&path)]);
    assert_eq!(r["verdicts"]["bounded"], true);
    assert_eq!(r["verdicts"]["unitary"], true);
    assert_eq!(r["verdicts"]["compact"], false);
    assert_eq!(r["norm"]["norm"].as_f64().unwrap(), 1.0);
    assert_eq!(r["dim"], 2);
}

#[test]
fn boundary_case_is_unbounded() {
    let f = Files::new();
    let path = f.write("u.json", BOUNDARY_UNBOUNDED);
    let r = json(&["classify", p(&path)]);
    assert_eq!(r["verdicts"]["bounded"], false);
    assert_eq!(r["verdicts"]["cms_condition"], false);
    assert_eq!(r["verdicts"]["boundary"], true);
    assert!(r["norm"]["norm"].is_null());
    assert!((r["norm"]["membership_residual"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn malformed_entry_is_located() {
    let f = Files::new();
    let path = f.write("bad.json", r#"{"dim":1,"A":[[[1]]],"b":[[0,0]]}"#);
    let (code, out, err) = bin(&["classify", p(&path)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.is_empty());
    assert!(err.contains("A[0][0]"), "{err}");
}

#[test]
fn unknown_keys_and_missing_files_are_input_errors() {
    let f = Files::new();
    let path = f.write("extra.json", r#"{"dim":1,"A":[[[1,0]]],"b":[[0,0]],"map":1}"#);
    assert_eq!(bin(&["classify", p(&path)]).0, EXIT_INPUT);
    let missing = f.dir.path().join("nope.json");
    assert_eq!(bin(&["classify", p(&missing)]).0, EXIT_INPUT);
    assert_eq!(bin(&["classify"]).0, EXIT_INPUT);
    assert_eq!(bin(&["frobnicate"]).0, EXIT_INPUT);
}

#[test]
fn validate_half_shift_passes() {
    let f = Files::new();
    let path = f.write("h.json", HALF);
    let r = json(&["validate", p(&path), "--degree", "16"]);
    let o = &r["oracles"];
    assert_eq!(o["pass"], true);
    assert_eq!(o["monotone"], true);
    assert_eq!(o["below_norm"], true);
    let norm = r["norm"]["norm"].as_f64().unwrap();
    assert!((norm - (1.0f64 / 6.0).exp()).abs() < 1e-12);
    let last = o["truncated_norms"].as_array().unwrap().last().unwrap()["norm"].as_f64().unwrap();
    assert!((norm - last) / norm < 1e-3);
    assert!((o["psd"]["lower_bound"].as_f64().unwrap() - norm).abs() <= 1e-6 * norm);
    assert_eq!(o["psd"]["certify"]["psd"], true);
}

#[test]
fn validate_refuses_unbounded_without_force() {
    let f = Files::new();
    let path = f.write("u.json", BOUNDARY_UNBOUNDED);
    let (code, _, err) = bin(&["validate", p(&path)]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("membership"), "{err}");
    let r = json(&["validate", p(&path), "--force", "--degree", "6"]);
    let norms: Vec<f64> = r["oracles"]["truncated_norms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["norm"].as_f64().unwrap())
        .collect();
    assert!(norms.windows(2).all(|w| w[1] > w[0]));
    assert!(r["oracles"]["below_norm"].is_null());
}

#[test]
fn validate_identity_is_all_ones() {
    let f = Files::new();
    let path = f.write("id.json", IDENTITY);
    let r = json(&["validate", p(&path), "--degree", "5"]);
    for e in r["oracles"]["truncated_norms"].as_array().unwrap() {
        assert!((e["norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
    assert!((r["oracles"]["psd"]["lower_bound"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn counterexample_preset_diverges() {
    let r = json(&["diag", "--preset", "paper-counterexample", "--horizon", "50"]);
    let d = &r["diag"];
    assert_eq!(d["verdict"], "diverging");
    assert_eq!(d["trivial_kernel"], true);
    let gaps = d["gaps"].as_array().unwrap();
    let g10 = gaps.iter().find(|g| g["m"] == 10).unwrap();
    assert!((g10["closed_form"].as_f64().unwrap() - 20.0).abs() < 1e-9);
    assert!(d["norm"].is_null());
}

#[test]
fn constant_preset_converges() {
    let r = json(&["diag", "--preset", "constant", "--param", "0.5", "--horizon", "1000"]);
    let d = &r["diag"];
    assert_eq!(d["verdict"], "converging");
    let last = d["partial_sums"].as_array().unwrap().last().unwrap();
    assert_eq!(last["m"], 1000);
    let s = last["sum"].as_f64().unwrap();
    // Σ (1/3) m⁻² → π²/18
    let limit = std::f64::consts::PI.powi(2) / 18.0;
    assert!(s < limit && limit - s < 4e-4);
    let s50 = d["partial_sums"].as_array().unwrap().iter().find(|e| e["m"] == 50).unwrap()["sum"]
        .as_f64()
        .unwrap();
    let want: f64 = (1..=50).map(|m| 1.0 / (3.0 * (m * m) as f64)).sum();
    assert!((s50 - want).abs() < 1e-12);
}

#[test]
fn zero_alpha_norm_is_shift_only() {
    let r = json(&["diag", "--preset", "constant", "--param", "0", "--horizon", "400"]);
    let d = &r["diag"];
    assert_eq!(d["verdict"], "converging");
    let want = (0.5 * (1..=400).map(|m| 1.0 / (m * m) as f64).sum::<f64>()).exp();
    assert!((d["norm"].as_f64().unwrap() - want).abs() < 1e-12 * want);
}

#[test]
fn explicit_preset_parses_complex_lists() {
    let r = json(&["diag", "--preset", "explicit", "--alpha", "0.5,0:0.25", "--b", "1,0.5:-0.5"]);
    assert_eq!(r["diag"]["verdict"], "converging");
    let want = 0.25 / 0.75 + 0.0625 * 0.5 / (1.0 - 0.0625);
    assert!((r["diag"]["partial_sums"].as_array().unwrap().last().unwrap()["sum"].as_f64().unwrap() - want).abs() < 1e-14);
    assert_eq!(bin(&["diag", "--preset", "explicit", "--alpha", "0.5,x", "--b", "1,1"]).0, EXIT_INPUT);
    assert_eq!(bin(&["diag", "--preset", "explicit", "--alpha", "1.5", "--b", "1"]).0, EXIT_INPUT);
    assert_eq!(bin(&["diag", "--preset", "bogus"]).0, EXIT_INPUT);
}

#[test]
fn json_output_round_trips_byte_for_byte() {
    let f = Files::new();
    let path = f.write("h.json", HALF);
    let (_, out, _) = bin(&["validate", p(&path), "--degree", "8"]);
    let report = bargmann::cli::Report::from_json(&out).unwrap();
    assert_eq!(report.to_json(), out.trim_end());
}

#[test]
fn output_is_deterministic_and_text_mirrors_json() {
    let f = Files::new();
    let path = f.write("h.json", HALF);
    let a = bin(&["validate", p(&path), "--seed", "7"]);
    let b = bin(&["validate", p(&path), "--seed", "7"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    let (_, text, _) = bin(&["validate", p(&path), "--seed", "7", "--output", "text"]);
    let want_norm = format!("norm.norm = {}", v["norm"]["norm"].as_f64().unwrap());
    assert!(text.lines().any(|l| l == want_norm), "{text}");
    assert!(text.lines().any(|l| l == "seed = 7"));
    assert!(text.lines().any(|l| l == "oracles.pass = true"));
}

#[test]
fn file_options_apply_and_flags_override() {
    let f = Files::new();
    let path = f.write(
        "o.json",
        r#"{"dim":1,"A":[[[0.5,0]]],"b":[[0.5,0]],"options":{"psd_tol":1e-11,"degree":4,"seed":3}}"#,
    );
    let r = json(&["validate", p(&path)]);
    assert_eq!(r["tolerances"]["psd_tol"].as_f64().unwrap(), 1e-11);
    assert_eq!(r["oracles"]["degree"], 4);
    assert_eq!(r["seed"], 3);
    let r = json(&["validate", p(&path), "--tol-psd", "1e-12", "--degree", "6"]);
    assert_eq!(r["tolerances"]["psd_tol"].as_f64().unwrap(), 1e-12);
    assert_eq!(r["oracles"]["degree"], 6);
}

#[test]
fn in_process_run_matches_binary() {
    let f = Files::new();
    let path = f.write("id.json", IDENTITY);
    let o = run(["bargmann", "classify", p(&path)]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout, bin(&["classify", p(&path)]).1);
    assert_eq!(run(["bargmann", "--version"]).code, EXIT_OK);
}

fn entry() -> impl Strategy<Value = String> {
    prop_oneof![
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| format!("[{a},{b}]")),
        Just("[1]".to_string()),
        Just("\"x\"".to_string()),
        Just("[1e400,0]".to_string()),
        Just("null".to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn malformed_files_never_panic(
        dim in 0usize..=3,
        decl in 0usize..=3,
        entries in prop::collection::vec(entry(), 12),
        garbage in prop::option::of("[ -~]{0,12}"),
    ) {
        let text = match garbage {
            Some(g) => g,
            None => {
                let row = |i: usize| format!("[{}]", (0..dim).map(|j| entries[(i * 3 + j) % 12].clone()).collect::<Vec<_>>().join(","));
                let a = (0..dim).map(row).collect::<Vec<_>>().join(",");
                let b = (0..dim).map(|j| entries[(9 + j) % 12].clone()).collect::<Vec<_>>().join(",");
                format!(r#"{{"dim":{decl},"A":[{a}],"b":[{b}]}}"#)
            }
        };
        let f = Files::new();
        let path = f.write("fuzz.json", &text);
        let classify = vec!["bargmann", "classify", p(&path)];
        let validate = vec!["bargmann", "validate", p(&path), "--degree", "3", "--samples", "4"];
        for args in [classify, validate] {
            let o = run(args);
            prop_assert!([0, 2, 3].contains(&o.code), "code {} for {text}", o.code);
            if o.code == EXIT_INPUT {
                prop_assert!(o.stderr.starts_with("error:"));
            }
        }
    }
}
