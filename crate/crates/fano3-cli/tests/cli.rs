//! Golden-file and contract tests for the command-line surface.

use std::process::Command;

fn fano3(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fano3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fano3(args);
    assert!(out.status.success(), "{args:?}: {:?}", out);
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn enumerate_csv_matches_golden_files() {
    for stage in [
        "p2",
        "p1p1-4",
        "f1-3",
        "f1-4",
        "fibre-4",
        "rho5",
        "disjoint-p3",
        "disjoint-q",
    ] {
        let got = stdout(&["enumerate", stage, "--format", "csv"]);
        let want = std::fs::read_to_string(format!(
            "{}/tests/golden/{stage}.csv",
            env!("CARGO_MANIFEST_DIR")
        ))
        .unwrap();
        assert_eq!(got, want, "stage {stage}");
    }
}

#[test]
fn enumerate_is_stable_across_runs() {
    let a = stdout(&["enumerate", "p2", "--format", "csv"]);
    let b = stdout(&["enumerate", "p2", "--format", "csv"]);
    assert_eq!(a, b);
}

#[test]
fn markdown_table_row_count() {
    let md = stdout(&["enumerate", "p2", "--format", "markdown"]);
    // header + separator + 21 rows
    assert_eq!(md.lines().count(), 23);
    assert!(md.starts_with("| X | Y | Y' | (-K_X)^3 | deg B | p_a(B) |"));
}

#[test]
fn show_json_round_trips() {
    let json = stdout(&["show", "2-24", "--format", "json"]);
    let parsed: fano3::atlas::FanoRecord = serde_json::from_str(&json).unwrap();
    let original = fano3::atlas::Atlas::get().lookup("2-24").unwrap();
    assert_eq!(&parsed, original);
    assert!(parsed.has_flag(fano3::atlas::Flag::WildConicBundlePossible));
}

#[test]
fn verify_all_is_clean() {
    let out = fano3(&["verify", "--all"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim().ends_with("0 failures"), "{text}");
}

#[test]
fn exit_codes() {
    // unknown id: usage error
    let out = fano3(&["show", "0-0"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown stage: clap usage error
    let out = fano3(&["enumerate", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    // happy path
    let out = fano3(&["show", "4-10"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn ring_dump_shape() {
    let json = stdout(&["ring", "P(O+O(2))/P2"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["canonical"], serde_json::json!([-2, -1]));
}

#[test]
fn graph_emits_dot() {
    let dot = stdout(&["graph", "--format", "dot"]);
    assert!(dot.starts_with("digraph blowdowns {"));
    assert!(dot.contains("\"2-33\" -> \"P3\""));
    assert!(dot.contains("\"4-10\" -> \"3-27\""));
}

#[test]
fn list_filters() {
    let rows = stdout(&["list", "--rho", "4", "--format", "csv"]);
    assert_eq!(rows.lines().count(), 14); // header + 13
    let wild = stdout(&["list", "--flag", "wild_conic_bundle_possible", "--format", "csv"]);
    assert_eq!(wild.lines().count(), 3);
}
