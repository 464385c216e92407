//! End-to-end tests of the `ybkit` binary: dump shapes, exit codes, config
//! handling, and report determinism.

use std::path::Path;
use std::process::{Command, Output};

use ybkit_core::dump::{parse_cp_weights, parse_rmatrix, to_json_text};

fn ybkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

// shrink every sampled check so suite-level tests stay quick
const FAST_SUITE: &str = "{\"sample_counts\": {\"\": 2}}";

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn build_six_vertex_has_six_entries_and_degenerate_flag() {
    let out = ybkit(&[
        "build",
        "six-vertex",
        "--gauge",
        "bbp",
        "--q-root",
        "5,1",
        "--x",
        "2",
        "--y",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (matrix, dump) = parse_rmatrix(&stdout_of(&out)).unwrap();
    assert_eq!(matrix.dims(), (2, 2));
    assert_eq!(matrix.count_nonzero(), 6);
    assert_eq!(dump.meta["degenerate"], "false");
    assert_eq!(dump.meta["model"], "six-vertex");
    assert_eq!(dump.meta["gauge"], "bbp");

    let degenerate = ybkit(&[
        "build",
        "six-vertex",
        "--q-root",
        "3,1",
        "--x",
        "1",
        "--y",
        "1",
    ]);
    assert_eq!(code(&degenerate), 0);
    let (_, dump) = parse_rmatrix(&stdout_of(&degenerate)).unwrap();
    assert_eq!(dump.meta["degenerate"], "true");
}

#[test]
fn build_six_vertex_without_q_is_a_usage_error() {
    let out = ybkit(&["build", "six-vertex", "--x", "2", "--y", "3"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn build_cp_weights_normalizes_w0() {
    let out = ybkit(&["build", "cp-weights", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let dump = parse_cp_weights(&stdout_of(&out)).unwrap();
    assert_eq!(dump.n, 3);
    assert_eq!(dump.w.len(), 3);
    assert_eq!(dump.w[0], [1.0, 0.0]);
    assert_eq!(dump.wb[0], [1.0, 0.0]);
}

#[test]
fn build_slmn_and_r4cp_produce_parsable_dumps() {
    let out = ybkit(&[
        "build", "slmn", "--m", "1", "--n", "1", "--eta", "0.3+0.1i", "--x", "2", "--y", "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (matrix, dump) = parse_rmatrix(&stdout_of(&out)).unwrap();
    assert_eq!(matrix.dims(), (2, 2));
    assert_eq!(dump.meta["model"], "slmn");

    let out = ybkit(&["build", "r4cp", "--n", "2", "--route", "diamond-corners"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (matrix, dump) = parse_rmatrix(&stdout_of(&out)).unwrap();
    assert_eq!(matrix.dims(), (2, 2));
    assert_eq!(dump.meta["support"], "unrestricted");

    let bad_route = ybkit(&["build", "r4cp", "--n", "2", "--route", "zigzag"]);
    assert_eq!(code(&bad_route), 2);
}

#[test]
fn dump_round_trip_is_byte_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dump.json");
    let out = ybkit(&[
        "build",
        "six-vertex",
        "--q",
        "0.3+0.4i",
        "--x",
        "0.9-0.2i",
        "--y",
        "1.1+0.7i",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let (matrix, dump) = parse_rmatrix(&text).unwrap();
    let again = to_json_text(&ybkit_core::dump::dump_rmatrix(&matrix, dump.meta.clone())).unwrap();
    assert_eq!(text, again, "write/read/write must be byte-stable");
}

#[test]
fn suite_with_missing_or_invalid_config_exits_2() {
    let missing = ybkit(&["suite", "--config", "/nonexistent/config.json"]);
    assert_eq!(code(&missing), 2);

    let dir = tempfile::tempdir().unwrap();
    for bad in [
        "{not json",
        "{\"unknown_key\": 1}",
        "{\"tolerances\": {\"x\": -1.0}}",
        "{\"sample_counts\": {\"x\": 0}}",
    ] {
        let path = write_config(dir.path(), bad);
        let out = ybkit(&["suite", "--config", &path]);
        assert_eq!(code(&out), 2, "config {bad:?} must be rejected");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn suite_passes_and_reports_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), FAST_SUITE);
    let report1 = dir.path().join("report1.json");
    let report2 = dir.path().join("report2.json");

    let out = ybkit(&["suite", "--config", &config, "--out", report1.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let lines = stdout_of(&out);
    assert!(lines.contains("PASS six-vertex-ybe-sym"));
    assert!(lines.contains("failed 0"));

    let out = ybkit(&["suite", "--config", &config, "--out", report2.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let bytes1 = std::fs::read(&report1).unwrap();
    let bytes2 = std::fs::read(&report2).unwrap();
    assert_eq!(bytes1, bytes2, "same config, same seed, same bytes");

    let parsed: serde_json::Value = serde_json::from_slice(&bytes1).unwrap();
    assert_eq!(parsed["summary"]["failed"], 0);
    assert!(parsed["checks"].as_array().unwrap().len() >= 60);
    assert!(parsed.get("timestamp").is_none());
}

#[test]
fn suite_tolerance_override_fails_with_report_written() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "{\"sample_counts\": {\"\": 2}, \"tolerances\": {\"six-vertex-ybe\": 1e-30}}",
    );
    let report = dir.path().join("report.json");
    let out = ybkit(&["suite", "--config", &config, "--out", report.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "failing checks exit 1");
    assert!(report.exists(), "report must still be written");
    let parsed: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(parsed["summary"]["failed"], 3, "all three gauges fail");
    let lines = stdout_of(&out);
    assert!(lines.contains("FAIL six-vertex-ybe-bbp"));
}

#[test]
fn suite_without_out_writes_report_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), FAST_SUITE);
    let out = ybkit(&["suite", "--config", &config]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(parsed["summary"]["failed"], 0);
}

#[test]
fn focused_checks_pass_and_honor_overrides() {
    for subcommand in ["ybe-check", "gauge-check", "star-triangle"] {
        let out = ybkit(&[subcommand, "--samples", "2"]);
        assert_eq!(
            code(&out),
            0,
            "{subcommand}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(stdout_of(&out).contains("PASS"));
    }

    let gauge_only = ybkit(&["ybe-check", "--samples", "2", "--gauge", "bs"]);
    assert_eq!(code(&gauge_only), 0);
    let lines = stdout_of(&gauge_only);
    assert!(lines.contains("six-vertex-ybe-bs"));
    assert!(!lines.contains("slmn-ybe"));

    let impossible = ybkit(&["ybe-check", "--samples", "2", "--tolerance", "1e-30"]);
    assert_eq!(code(&impossible), 1);

    let invalid = ybkit(&["ybe-check", "--tolerance", "-1"]);
    assert_eq!(code(&invalid), 2);
}

#[test]
fn scan_parity_tabulates_the_dichotomy() {
    let out = ybkit(&["scan-parity", "2", "7"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<String> = stdout_of(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 6);
    for (i, line) in lines.iter().enumerate() {
        let n = 2 + i as u32;
        let expected = if n % 2 == 0 { "-1" } else { "+1" };
        assert!(line.starts_with(&format!("N={n} ")), "{line}");
        assert!(line.contains(&format!("q1^N={expected}")), "{line}");
    }
    // even orders list both square roots, odd orders a single value
    let bracket = |line: &str| {
        let start = line.find("q1=[").unwrap() + 4;
        line[start..line.len() - 1].to_string()
    };
    assert_eq!(bracket(&lines[0]).split(' ').count(), 2, "{}", lines[0]);
    assert_eq!(bracket(&lines[1]).split(' ').count(), 1, "{}", lines[1]);

    let single = ybkit(&["scan-parity", "3", "3"]);
    assert_eq!(code(&single), 0);
    assert_eq!(stdout_of(&single).lines().count(), 1);

    let bad = ybkit(&["scan-parity", "5", "3"]);
    assert_eq!(code(&bad), 2);
    let bad = ybkit(&["scan-parity", "1", "3"]);
    assert_eq!(code(&bad), 2);
}
