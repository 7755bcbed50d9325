use std::path::Path;
use std::process::{Command, Output};

fn bin(cache: &Path) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mathieu-trace"));
    c.env("MATHIEU_TRACE_CACHE", cache);
    c
}

fn run(cache: &Path, args: &[&str]) -> Output {
    bin(cache).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn harmonic_eigenvalues_are_odd_integers() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&dir.path().join("c.json"), &["eig", "harmonic", "--count", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lambdas: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(lambdas.len(), 5);
    for (i, l) in lambdas.iter().enumerate() {
        assert!((l - (2 * i + 1) as f64).abs() < 1e-8);
    }
}

#[test]
fn unknown_model_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&dir.path().join("c.json"), &["eig", "bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("harmonic"));
}

#[test]
fn order_above_limit_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&dir.path().join("c.json"), &["trace", "cosh", "--order", "99"]).status.code(), Some(1));
}

fn det_json(cache: &Path, args: &[&str]) -> serde_json::Value {
    let mut full = vec!["det"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--format", "json"]);
    let o = run(cache, &full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn determinant_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    // 2^{3/2}√π/Γ(2)
    let h = det_json(&cache, &["harmonic", "--lambda", "-3"]);
    assert!((h["a"].as_f64().unwrap() / 5.013_256_549_262_001 - 1.0).abs() < 1e-9);
    // K₅(1)/K₀(1)
    let e = det_json(&cache, &["exp", "--lambda", "-25"]);
    assert!((e["a"].as_f64().unwrap() / 857.338_807_005_003_6 - 1.0).abs() < 1e-9);
    let c = det_json(&cache, &["cosh", "--lambda", "0"]);
    assert_eq!(c["a"].as_f64().unwrap(), 1.0);
}

#[test]
fn json_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let args = ["trace", "exp", "--order", "2", "--format", "json"];
    let a = run(&cache, &args);
    let b = run(&cache, &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupt_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    std::fs::write(&cache, "{\"schema\": 1, \"entries\": [").unwrap();
    let o = run(&cache, &["eig", "cosh", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(v["entries"][0]["records"].as_array().unwrap().len(), 4);
    let again = run(&cache, &["eig", "cosh", "--count", "4"]);
    assert!(again.stderr.is_empty());
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn cache_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let env_path = dir.path().join("env.json");
    let flag_path = dir.path().join("flag.json");
    run(&env_path, &["eig", "exp", "--count", "3"]);
    assert!(env_path.exists());
    run(&env_path, &["eig", "exp", "--count", "3", "--cache", flag_path.to_str().unwrap()]);
    assert!(flag_path.exists());
}

#[test]
fn verify_specfun_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&dir.path().join("c.json"), &["verify", "specfun"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    assert!(text.contains("legendre-relation") && text.contains("connection-identity") && text.contains("k-half-closed-form"));
}

#[test]
fn output_file_extension_selects_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eig.json");
    let o = run(&dir.path().join("c.json"), &["eig", "exp", "--count", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
}
