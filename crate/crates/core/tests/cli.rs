use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_newton-atlas");

fn run(dir: &Path, spec: &str, args: &[&str]) -> Output {
    let spec_path = dir.join("spec.json");
    std::fs::write(&spec_path, spec).unwrap();
    Command::new(BIN)
        .args(args)
        .arg("--spec")
        .arg(&spec_path)
        .arg("--out")
        .arg(dir.join("out"))
        .env_remove("NEWTON_ATLAS_THREADS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

const QUADRATIC: &str = r#"{"rational": {"num": [1, 0, 1], "den": [0, 2]}}"#;
const PARABOLIC: &str = r#"{"rational": {"num": [0, 0, 1], "den": [1, 1]}}"#;
const CUBIC: &str = r#"{"newton": {"roots": [
    {"z": 1, "m": 1},
    {"z": [-0.5, 0.8660254037844386], "m": 1},
    {"z": [-0.5, -0.8660254037844386], "m": 1}]}, "resolution": 256}"#;
const QUARTIC: &str = r#"{"newton": {"roots": [{"z": 1, "m": 1}, {"z": -1, "m": 1}], "q": [0, 0, [0.5, 1.0]]},
    "resolution": 256}"#;

#[test]
fn detect_accepts_the_quadratic() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), QUADRATIC, &["detect"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "newton");
    assert_eq!(v["certificate"]["k"], 2);
    assert_eq!(v["certificate"]["n"], 0);
    assert_eq!(v["certificate"]["degree"], 2);
    assert_eq!(v["provenance"]["tol"], 1e-6);
    // Same document saved under --out.
    assert_eq!(std::fs::read(dir.path().join("out/detect.json")).unwrap(), out.stdout);
}

#[test]
fn detect_rejects_z_squared() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), r#"{"rational": {"num": [0, 0, 1], "den": [1]}}"#, &["detect"]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["verdict"], "not_newton");
    assert_eq!(v["reason"]["reason"], "NonPositiveResidue");
    assert!((v["reason"]["value"][0].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn malformed_specs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), r#"{"rational": {"num": [0, 0, 1]}}"#, &["detect"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("den"));
    for bad in [
        "not json",
        r#"{}"#,
        r#"{"rational": {"num": [1], "den": [1]}, "newton": {"roots": []}}"#,
        r#"{"rational": {"num": [1, "x"], "den": [1]}}"#,
        r#"{"rational": {"num": [1, 2], "den": [1]}, "extra": 1}"#,
        r#"{"newton": {"roots": [{"z": 1, "m": 1}]}, "region": {"center": 0, "width": -1, "height": 1}}"#,
    ] {
        assert_eq!(code(&run(dir.path(), bad, &["analyze"])), 2, "{bad}");
    }
    assert_eq!(code(&run(dir.path(), CUBIC, &["basins", "--resolution", "0"])), 2);
    assert_eq!(code(&run(dir.path(), CUBIC, &["no-such-command"])), 2);
}

#[test]
fn analyze_reports() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(dir.path(), PARABOLIC, &["analyze"]));
    assert_eq!(v["infinity"]["kind"], "parabolic");
    assert_eq!(v["infinity"]["parabolic_multiplicity"], 2);
    let petals = v["petal_directions"].as_array().unwrap();
    assert_eq!(petals.len(), 1);
    assert!((petals[0][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    let mut cps: Vec<f64> = v["critical_points"]["finite"].as_array().unwrap().iter().map(|c| c["z"][0].as_f64().unwrap()).collect();
    cps.sort_by(f64::total_cmp);
    assert!((cps[0] + 2.0).abs() < 1e-10 && cps[1].abs() < 1e-10);
    assert!(v["provenance"]["escape_radius"].as_f64().unwrap() > 0.0);

    let v = json(&run(dir.path(), QUADRATIC, &["analyze"]));
    assert_eq!(v["infinity"]["kind"], "repelling");
    assert_eq!(v["infinity"]["multiplier"], 2.0);

    let out = run(dir.path(), r#"{"newton": {"roots": [{"z": 0, "m": 1}]}}"#, &["analyze"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn basins_of_the_cubic() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), CUBIC, &["basins"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let basins = v["census"]["basins"].as_array().unwrap();
    assert_eq!(basins.len(), 3);
    for b in basins {
        assert_eq!((b["k"].as_u64(), b["restriction_degree"].as_u64(), b["access_count"].as_u64()), (Some(1), Some(2), Some(1)));
    }
    for f in ["basins.nbas", "basins.ppm", "census.json"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
    let ppm = std::fs::read(dir.path().join("out/basins.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6 256 256 255\n"));
}

#[test]
fn basins_of_the_figure_one_quartic() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(dir.path(), QUARTIC, &["basins"]));
    let basins = v["census"]["basins"].as_array().unwrap();
    assert_eq!(basins.len(), 4);
    let gray: Vec<&Value> = basins.iter().filter(|b| b["serves"].get("petal").is_some()).collect();
    assert_eq!(gray.len(), 2);
    for b in gray {
        assert_eq!(b["k"], 2);
        assert_eq!(b["access_count"], 2);
    }
}

#[test]
fn census_refusal_exits_4() {
    // At 4×4 pixels every critical point sits next to a basin boundary.
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), CUBIC, &["basins", "--resolution", "4"]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resolution"));
}

#[test]
fn trace_access() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), PARABOLIC, &["trace-access", "--seed", "-10", "--resolution", "64"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let d = &v["landing_direction"];
    assert!((d[0].as_f64().unwrap() + 1.0).abs() < 1e-9 && d[1].as_f64().unwrap().abs() < 1e-9);
    assert!(dir.path().join("out/trace.ppm").exists());

    let out = run(dir.path(), PARABOLIC, &["trace-access", "--seed", "0,0", "--resolution", "64"]);
    assert_eq!(code(&out), 5);
    let out = run(dir.path(), QUADRATIC, &["trace-access", "--seed", "-10", "--resolution", "64"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not parabolic"));
    let out = run(dir.path(), PARABOLIC, &["trace-access", "--resolution", "64"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("spec.json"), QUARTIC).unwrap();
        let out = Command::new(BIN)
            .args(["basins", "--resolution", "96", "--spec"])
            .arg(dir.path().join("spec.json"))
            .arg("--out")
            .arg(dir.path())
            .env("NEWTON_ATLAS_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        let files: Vec<Vec<u8>> = ["basins.nbas", "basins.ppm", "census.json"]
            .iter()
            .map(|f| std::fs::read(dir.path().join(f)).unwrap())
            .collect();
        outputs.push((out.stdout, files));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn threads_flag_and_env_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), CUBIC, &["basins", "--resolution", "128", "--threads", "2"])), 0);
    let out = Command::new(BIN).args(["detect", "--spec", "/nonexistent/spec.json"]).env("NEWTON_ATLAS_THREADS", "x").output().unwrap();
    assert_eq!(code(&out), 2);
}
