//! End-to-end checks of the binary: file loading, exit codes, output
//! determinism, and the suite's corruption hook.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_glutop"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn validate_clean_fixtures_exits_zero() {
    let out = bin()
        .current_dir(fixtures())
        .args([
            "validate",
            "span.json",
            "counterexample_x.json",
            "y_to_x.json",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn validate_broken_table_reports_missing_composite() {
    let dir = std::env::temp_dir().join("glutop_cli_io_broken");
    std::fs::create_dir_all(&dir).unwrap();
    let text = std::fs::read_to_string(fixtures().join("span.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let comp = v["composition"].as_array().unwrap().clone();
    v["composition"] = serde_json::Value::Array(
        comp.into_iter()
            .filter(|c| !(c[0] == "p" && c[1] == "id2"))
            .collect(),
    );
    let path = dir.join("broken_span.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("MissingComposite"), "{stdout}");
}

#[test]
fn unknown_keys_are_a_parse_error() {
    let dir = std::env::temp_dir().join("glutop_cli_io_unknown");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"objects": ["a"], "junk": 1}"#).unwrap();
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn omega_output_is_deterministic() {
    let run = || {
        bin()
            .current_dir(fixtures())
            .args(["omega", "span.json", "--check"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn omega_sizes_on_the_span() {
    let out = bin()
        .current_dir(fixtures())
        .args(["omega", "span.json", "--format", "summary"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let line = String::from_utf8_lossy(&out.stdout);
    let sizes: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(sizes["0"], 2);
    assert_eq!(sizes["1"], 2);
    assert_eq!(sizes["2"], 5);
}

#[test]
fn oracle_subcommands_agree_with_construction() {
    let out = bin()
        .current_dir(fixtures())
        .args(["oracle", "omega", "span.json", "--format", "summary"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let sizes: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(sizes["2"], 5);
    let out = bin()
        .current_dir(fixtures())
        .args(["oracle", "verify", "span.json", "--monos", "5"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn homotopy_verdict_shape() {
    let out = bin()
        .current_dir(fixtures())
        .args(["homotopy", "span.json", "x_to_point.json", "y_to_x.json"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(v["all_epi"], true);
    let verdict = v["verdict"].as_array().unwrap();
    assert_eq!(verdict.len(), 3);
    for entry in verdict {
        for key in ["object", "phi_bijective", "kappa_bijective", "initiality"] {
            assert!(entry.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn env_cap_override_is_honored() {
    let out = bin()
        .current_dir(fixtures())
        .env("GLUTOP_CAP", "1")
        .args(["omega", "span.json"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "tiny cap must exhaust the budget"
    );
}

#[test]
fn dot_export_marks_weak_equivalences() {
    let out = bin()
        .current_dir(fixtures())
        .args(["omega", "span.json", "--format", "dot"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let dot = String::from_utf8_lossy(&out.stdout);
    assert!(dot.contains("digraph"));
    assert!(dot.contains("label=\"q\", style=dashed"), "{dot}");
    assert!(dot.contains("label=\"p\"]"), "{dot}");
}

#[test]
fn suite_corruption_hook_fails_loudly() {
    let out = bin()
        .env("GLUTOP_SUITE_CORRUPT", "1")
        .args(["suite", "--count", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn suite_count_zero_warns_and_passes() {
    let out = bin().args(["suite", "--count", "0"]).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("warning"));
    assert!(stdout.contains("PASS"));
}

#[test]
fn localize_reports_seven_morphisms() {
    let out = bin()
        .current_dir(fixtures())
        .args(["localize", "span.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(v["target"]["morphisms"].as_array().unwrap().len(), 7);
    assert_eq!(v["all_epi"], true);
}

#[test]
fn explicit_localization_files_are_validated_and_usable() {
    // build an explicit localization file from the localize output, then
    // drive the comparison command through it
    let out = bin()
        .current_dir(fixtures())
        .args(["localize", "span.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    let dir = std::env::temp_dir().join("glutop_cli_io_explicit");
    std::fs::create_dir_all(&dir).unwrap();
    let span_path = fixtures().join("span.json");
    let explicit = serde_json::json!({
        "base": span_path.to_str().unwrap(),
        "target": v["target"],
        "gamma": v["gamma"],
    });
    let loc_path = dir.join("explicit.json");
    std::fs::write(&loc_path, serde_json::to_string(&explicit).unwrap()).unwrap();
    let out = bin()
        .args([
            "homotopy",
            loc_path.to_str().unwrap(),
            fixtures().join("x_to_point.json").to_str().unwrap(),
            fixtures().join("y_to_x.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let verdict: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(verdict["all_epi"], true);

    // a gamma that misses a generated morphism is rejected
    let mut broken = explicit.clone();
    broken["target"]["morphisms"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!({"id": "stray", "src": "0", "tgt": "1"}));
    let broken_path = dir.join("broken.json");
    std::fs::write(&broken_path, serde_json::to_string(&broken).unwrap()).unwrap();
    let out = bin()
        .args([
            "homotopy",
            broken_path.to_str().unwrap(),
            fixtures().join("x_to_point.json").to_str().unwrap(),
            fixtures().join("y_to_x.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
