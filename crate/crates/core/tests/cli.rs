//! End-to-end CLI tests against the built `zac` binary: subcommand
//! behavior, exit codes, debug dumps and output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus")
}

fn zac(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zac"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn zac_env(args: &[&str], cwd: &Path, key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zac"))
        .args(args)
        .current_dir(cwd)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn analyze_writes_model_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let root = corpus_root();
    let output = zac(
        &[
            "analyze",
            root.to_str().unwrap(),
            "--out",
            "corpus.model.json",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    assert!(dir.path().join("corpus.model.json").exists());
    let text = stdout_of(&output);
    assert!(text.contains("analyzed 17 artifacts"), "{text}");
}

#[test]
fn analyze_missing_root_exits_two_and_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let output = zac(&["analyze", "/nonexistent/zac-root"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("/nonexistent/zac-root"), "{err}");
}

#[test]
fn analyze_rerun_is_byte_identical_and_parallel_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let root = corpus_root();
    let root = root.to_str().unwrap();
    assert_eq!(
        zac(&["analyze", root, "--out", "a.json"], dir.path()).status.code(),
        Some(0)
    );
    assert_eq!(
        zac(&["analyze", root, "--out", "b.json"], dir.path()).status.code(),
        Some(0)
    );
    assert_eq!(
        zac_env(
            &["analyze", root, "--out", "c.json"],
            dir.path(),
            "ZAC_NO_PARALLEL",
            "1"
        )
        .status
        .code(),
        Some(0)
    );
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    let c = std::fs::read(dir.path().join("c.json")).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

fn analyzed_model(dir: &Path) -> PathBuf {
    let root = corpus_root();
    let output = zac(
        &["analyze", root.to_str().unwrap(), "--out", "m.model.json"],
        dir,
    );
    assert_eq!(output.status.code(), Some(0));
    dir.join("m.model.json")
}

#[test]
fn measure_produces_report_with_all_selections() {
    let dir = tempfile::tempdir().unwrap();
    let model = analyzed_model(dir.path());
    let output = zac(
        &[
            "measure",
            model.to_str().unwrap(),
            "--out",
            "report.json",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["characteristics"].as_object().unwrap().len(), 9);
    assert_eq!(
        report["traditional"].as_object().unwrap().len()
            + report["product_line"].as_object().unwrap().len(),
        6
    );
    let text = stdout_of(&output);
    assert!(text.contains("Artifacts"), "{text}");
    assert!(text.contains("CLD"), "{text}");
}

#[test]
fn measure_bad_model_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("junk.json"), "{}").unwrap();
    let output = zac(&["measure", "junk.json"], dir.path());
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn measure_unknown_metric_in_plan_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let model = analyzed_model(dir.path());
    std::fs::write(
        dir.path().join("bad-plan.toml"),
        "schema = \"zac-plan/1\"\nname = \"bad\"\n\n[[goals]]\ntext = \"g\"\n\n[[goals.questions]]\ntext = \"q\"\nmetrics = [\"LOC\"]\n",
    )
    .unwrap();
    let output = zac(
        &[
            "measure",
            model.to_str().unwrap(),
            "--plan",
            "bad-plan.toml",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("LOC"));
}

#[test]
fn measure_unreadable_plan_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let model = analyzed_model(dir.path());
    let output = zac(
        &[
            "measure",
            model.to_str().unwrap(),
            "--plan",
            "does-not-exist.toml",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn measure_log_records_runs() {
    let dir = tempfile::tempdir().unwrap();
    let model = analyzed_model(dir.path());
    for expected in ["recorded run 1", "recorded run 2"] {
        let output = zac(
            &[
                "measure",
                model.to_str().unwrap(),
                "--out",
                "r.json",
                "--log",
                "runs.jsonl",
            ],
            dir.path(),
        );
        assert_eq!(output.status.code(), Some(0));
        assert!(stdout_of(&output).contains(expected));
    }
}

fn write_report(dir: &Path, name: &str, values: &[(&str, u64)]) -> PathBuf {
    let model = analyzed_model(dir);
    let output = zac(
        &["measure", model.to_str().unwrap(), "--out", name],
        dir,
    );
    assert_eq!(output.status.code(), Some(0));
    // Patch the measured values so compare sees the intended numbers.
    let path = dir.join(name);
    let mut report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for (key, value) in values {
        if let Some(slot) = report["characteristics"].get_mut(*key) {
            *slot = serde_json::json!(value);
        }
        for family in ["traditional", "product_line"] {
            if let Some(slot) = report[family].get_mut(*key) {
                slot["aggregate_sum"] = serde_json::json!(value);
            }
        }
    }
    std::fs::write(&path, serde_json::to_string_pretty(&report).unwrap()).unwrap();
    path
}

#[test]
fn compare_renders_published_style_rows() {
    let dir = tempfile::tempdir().unwrap();
    let old = write_report(
        dir.path(),
        "old.json",
        &[("classes", 333), ("includes", 1027), ("CLD", 66)],
    );
    let new = write_report(
        dir.path(),
        "new.json",
        &[("classes", 207), ("includes", 532), ("CLD", 21)],
    );
    let output = zac(
        &["compare", old.to_str().unwrap(), new.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = stdout_of(&output);
    assert!(text.contains("Classes"), "{text}");
    assert!(text.contains("126"), "{text}");
    assert!(text.contains("37.84 %"), "{text}");
    assert!(text.contains("48.20 %"), "{text}");
    assert!(text.contains("68.18 %"), "{text}");
}

#[test]
fn compare_identical_reports_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let report = write_report(dir.path(), "same.json", &[]);
    let output = zac(
        &[
            "compare",
            report.to_str().unwrap(),
            report.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    assert!(text.contains("0.00 %"), "{text}");
}

#[test]
fn compare_mismatched_plans_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let full = write_report(dir.path(), "full.json", &[]);
    // Drop one measure from a copy.
    let mut report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&full).unwrap()).unwrap();
    report["traditional"].as_object_mut().unwrap().remove("CLD");
    let partial = dir.path().join("partial.json");
    std::fs::write(&partial, serde_json::to_string(&report).unwrap()).unwrap();
    let output = zac(
        &["compare", full.to_str().unwrap(), partial.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&output.stderr).contains("CLD"));
}

#[test]
fn correlate_prints_r_and_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let old = write_report(
        dir.path(),
        "v10.json",
        &[
            ("CLD", 66),
            ("DIT", 232),
            ("NOC", 64),
            ("NIT", 7),
            ("NOA", 783),
            ("CIR", 160),
        ],
    );
    let new = write_report(
        dir.path(),
        "v11.json",
        &[
            ("CLD", 21),
            ("DIT", 145),
            ("NOC", 21),
            ("NIT", 6),
            ("NOA", 704),
            ("CIR", 97),
        ],
    );
    let output = zac(
        &["correlate", old.to_str().unwrap(), new.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = stdout_of(&output);
    assert!(text.contains("CLD:NIT (old)"), "{text}");
    assert!(text.contains("r = +0.9293"), "{text}");
    assert!(text.contains("+0.93"), "{text}");
}

#[test]
fn viz_all_five_modes_succeed_and_unknown_mode_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    let model = analyzed_model(dir.path());
    let model = model.to_str().unwrap();
    for (mode, extension) in [
        ("treemap", "svg"),
        ("bars", "svg"),
        ("namespaces", "dot"),
        ("inheritance", "dot"),
        ("includes", "dot"),
    ] {
        let output = zac(&["viz", model, "--mode", mode], dir.path());
        assert_eq!(output.status.code(), Some(0), "mode {mode}: {output:?}");
        let expected = dir.path().join(format!("m.model.{mode}.{extension}"));
        assert!(expected.exists(), "missing {expected:?}");
    }
    let output = zac(&["viz", model, "--mode", "pie"], dir.path());
    assert_eq!(output.status.code(), Some(5));
}

#[test]
fn viz_respects_canvas_size() {
    let dir = tempfile::tempdir().unwrap();
    let model = analyzed_model(dir.path());
    let output = zac(
        &[
            "viz",
            model.to_str().unwrap(),
            "--mode",
            "treemap",
            "--canvas",
            "400x100",
            "--out",
            "-",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout_of(&output).contains("viewBox=\"0 0 400 100\""));
}

#[test]
fn export_tables_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let model = analyzed_model(dir.path());
    let model = model.to_str().unwrap();

    let output = zac(&["export", model, "--table", "artifacts"], dir.path());
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    assert_eq!(text.lines().count(), 18); // header + 17 artifacts

    let output = zac(&["export", model, "--table", "bogus"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("artifacts"));

    let measure = zac(&["measure", model, "--out", "r.json"], dir.path());
    assert_eq!(measure.status.code(), Some(0));
    let output = zac(&["export", "r.json", "--table", "report"], dir.path());
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_of(&output).lines().count(), 16); // header + 9 + 6
}

#[test]
fn dump_flags_emit_tokens_and_events() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("tree")).unwrap();
    std::fs::write(
        dir.path().join("tree/a.cpp"),
        "#define MAX 10\nclass A {};\n",
    )
    .unwrap();
    let output = zac(
        &[
            "analyze",
            "tree",
            "--dump-tokens",
            "--dump-events",
            "--out",
            "t.json",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    assert!(text.contains("== a.cpp"), "{text}");
    assert!(text.contains("1:1 preproc_directive #define"), "{text}");
    assert!(text.contains("2 class A"), "{text}");
}

#[test]
fn analyze_exclude_glob_prunes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(dir.path().join("tree/build")).unwrap();
    std::fs::write(dir.path().join("tree/a.cpp"), "int x;\n").unwrap();
    std::fs::write(dir.path().join("tree/build/b.cpp"), "int y;\n").unwrap();
    let output = zac(
        &[
            "analyze",
            "tree",
            "--exclude",
            "build",
            "--out",
            "t.json",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout_of(&output).contains("analyzed 1 artifacts"));
}

#[test]
fn stdout_output_with_dash() {
    let dir = tempfile::tempdir().unwrap();
    let root = corpus_root();
    let output = zac(
        &["analyze", root.to_str().unwrap(), "--out", "-"],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout_of(&output).contains("\"schema\": \"zac-model/1\""));
}
