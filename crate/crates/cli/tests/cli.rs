use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirichlet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Real parts of the coefficients, keyed by index.
fn real_coeffs(doc: &Value) -> Vec<(u64, String)> {
    doc["coeffs"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.parse().unwrap(), v[0].as_str().unwrap().to_string()))
        .collect()
}

fn build(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let p = path(dir, name);
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", s(&p)]);
    let out = run(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn build_zeta_and_monomial() {
    let out = run(&["build", "zeta", "--window", "6"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["window"], 6);
    assert_eq!(doc["mode"], "exact");
    assert_eq!(real_coeffs(&doc).len(), 6);
    assert_eq!(doc["provenance"]["tool"], "dirichlet");

    let doc = stdout_json(&run(&["build", "monomial", "12", "5", "--window", "20"]));
    assert_eq!(real_coeffs(&doc), vec![(12, "5/1".to_string())]);
}

#[test]
fn random_build_is_deterministic_and_out_is_not_recorded() {
    let dir = TempDir::new().unwrap();
    let a = build(&dir, "a.json", &["random", "--window", "40", "--seed", "7"]);
    let b = build(&dir, "b.json", &["random", "--window", "40", "--seed", "7"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = build(&dir, "c.json", &["random", "--window", "40", "--seed", "8"]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn inverting_zeta_gives_mobius() {
    let dir = TempDir::new().unwrap();
    let z = build(&dir, "z.json", &["zeta", "--window", "8"]);
    let doc = stdout_json(&run(&["op", "invert", s(&z)]));
    let want: Vec<(u64, String)> = [
        (1, "1/1"),
        (2, "-1/1"),
        (3, "-1/1"),
        (5, "-1/1"),
        (6, "1/1"),
        (7, "-1/1"),
    ]
    .iter()
    .map(|&(n, c)| (n, c.to_string()))
    .collect();
    assert_eq!(real_coeffs(&doc), want);
}

#[test]
fn non_invertible_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let m = build(&dir, "m.json", &["monomial", "2", "1", "--window", "8"]);
    assert_eq!(code(&run(&["op", "invert", s(&m)])), 2);
}

#[test]
fn projection_under_an_infinite_shift() {
    let dir = TempDir::new().unwrap();
    let z = build(&dir, "z.json", &["zeta", "--window", "30"]);
    let refused = run(&["op", "project", s(&z), "--gens", "shift(1)"]);
    assert_eq!(code(&refused), 3);
    let out = run(&[
        "op",
        "project",
        s(&z),
        "--gens",
        "shift(1)",
        "--policy",
        "zero_unresolved",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        real_coeffs(&stdout_json(&out)),
        vec![(1, "1/1".to_string())]
    );
}

#[test]
fn lift_then_drop_round_trips() {
    let dir = TempDir::new().unwrap();
    let f = build(&dir, "f.json", &["random", "--window", "50", "--seed", "3"]);
    let p = path(&dir, "p.json");
    assert_eq!(code(&run(&["op", "lift", s(&f), "--out", s(&p)])), 0);
    let back = stdout_json(&run(&["op", "drop", s(&p), "--window", "50"]));
    let orig: Value = serde_json::from_slice(&std::fs::read(&f).unwrap()).unwrap();
    assert_eq!(back["coeffs"], orig["coeffs"]);
    // A polynomial where a series is expected.
    assert_eq!(code(&run(&["op", "invert", s(&p)])), 2);
}

#[test]
fn verify_passes_and_reports() {
    let out = run(&["verify", "--suite", "thm1.7", "--trials", "10"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let doc = stdout_json(&out);
    assert_eq!(doc["suite"], "thm1.7");
    assert_eq!(doc["checks"], 50);
    assert_eq!(doc["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn unknown_suite_exits_with_usage_error() {
    let out = run(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("prop3.1a"));
}

#[test]
fn listing_names_every_suite() {
    let doc = stdout_json(&run(&["verify", "--list"]));
    let names: Vec<&str> = doc
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    for want in [
        "prop3.1a",
        "thm1.7",
        "lemma6.4",
        "lemma9.1",
        "bohr-lemma",
        "prop1.1",
        "prop1.2",
        "eq2.8",
    ] {
        assert!(names.contains(&want), "missing {want}");
    }
}

#[test]
fn replay_reruns_recorded_inputs() {
    let dir = TempDir::new().unwrap();
    let z = build(&dir, "z.json", &["zeta", "--window", "6"]);
    let zeta: Value = serde_json::from_slice(&std::fs::read(&z).unwrap()).unwrap();
    // A recorded failure whose inputs actually satisfy the property.
    let passing = serde_json::json!({
        "suite": "prop3.1a", "trials": 1, "checks": 1, "seed": 0, "elapsed": 0.0,
        "failures": [{"property": "associativity", "inputs": {"f": zeta, "g": zeta, "h": zeta},
                      "expected": null, "got": null}],
    });
    let file = path(&dir, "passing.json");
    std::fs::write(&file, passing.to_string()).unwrap();
    let out = run(&["verify", "--replay", s(&file)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["replayed"], 1);

    // Inputs that cannot be decoded are reported as a failure, not a crash.
    let broken = serde_json::json!([{"property": "associativity", "inputs": {}, "expected": null, "got": null}]);
    std::fs::write(&file, broken.to_string()).unwrap();
    let out = run(&["verify", "--replay", s(&file)]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let z = build(&dir, "z.json", &["zeta", "--window", "12"]);

    let doc = stdout_json(&run(&["analyze", "torus-sup", s(&z), "--r", "1"]));
    assert!((doc["value"].as_f64().unwrap() - 12.0).abs() < 1e-9);

    let out = run(&["analyze", "seminorm-profile", s(&z), "--r-grid", "0.2:1:5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert_eq!(lines.next().unwrap(), "r,value,tolerance");
    let values: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 5);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));

    let m = build(
        &dir,
        "m.json",
        &["monomial", "5", "3", "--window", "5", "--mode", "float"],
    );
    let doc = stdout_json(&run(&[
        "analyze",
        "perron",
        s(&m),
        "--n",
        "5",
        "--steps",
        "50000",
    ]));
    let err = doc["witness"]["error"].as_f64().unwrap();
    assert!(err <= doc["tolerance"].as_f64().unwrap());
    assert!(err < 1e-2);
}

#[test]
fn bad_radius_grid_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let z = build(&dir, "z.json", &["zeta", "--window", "4"]);
    assert_eq!(
        code(&run(&[
            "analyze",
            "seminorm-profile",
            s(&z),
            "--r-grid",
            "0:2:3"
        ])),
        2
    );
}
