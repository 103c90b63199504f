//! End-to-end checks of the command-line interface: exit codes, the
//! machine-readable result line, and determinism of the output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_graphmcg")
}

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("tests/fixtures");
    path.push(name);
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn result_line(output: &Output) -> String {
    stdout(output)
        .lines()
        .find(|l| l.starts_with("#RESULT"))
        .expect("result line present")
        .to_string()
}

#[test]
fn classify_loch_ness_is_cb() {
    let out = run(&["classify", &fixture("lochness.gd")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("class: CB\n"), "{text}");
    assert!(result_line(&out).contains("class=Cb "));
}

#[test]
fn classify_output_is_deterministic() {
    let a = run(&["classify", &fixture("ladder_ray.gd")]);
    let b = run(&["classify", &fixture("ladder_ray.gd")]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(result_line(&a), result_line(&b));
}

#[test]
fn flux_agreement_exits_zero() {
    let out = run(&[
        "flux",
        "-g",
        &fixture("ladder_ray.gd"),
        "--word",
        "shift(1)",
        "--clopen",
        "[A1]",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("fast=1 oracle=1 AGREE"), "{text}");
}

#[test]
fn flux_on_finite_rank_graph_is_a_computation_error() {
    let out = run(&[
        "flux",
        "-g",
        &fixture("rank2_cantor.gd"),
        "--word",
        "shift(1)",
        "--clopen",
        "[A1]",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = run(&["classify", "definitely_missing.gd"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_word_syntax_is_a_usage_error() {
    let out = run(&[
        "flux",
        "-g",
        &fixture("ladder_ray.gd"),
        "--word",
        "twist(1)",
        "--clopen",
        "[A1]",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn props_and_h1_report() {
    let out = run(&["props", &fixture("rank2_cantor.gd")]);
    assert_eq!(out.status.code(), Some(0));
    let line = result_line(&out);
    assert!(line.contains("rf=true") && line.contains("ta_map=false"), "{line}");

    let out = run(&["h1", &fixture("ladder_ray.gd")]);
    assert!(result_line(&out).ends_with("rank=1"));
}

#[test]
fn genset_counts_on_the_ladder_with_ray() {
    let out = run(&["genset", &fixture("ladder_ray.gd")]);
    assert_eq!(out.status.code(), Some(0));
    let line = result_line(&out);
    assert!(
        line.contains("word_maps=1") && line.contains("loop_swaps=1") && line.contains("loop_shifts=1"),
        "{line}"
    );
}

#[test]
fn selftest_passes_headlessly() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 9, "{text}");
    assert!(result_line(&out).contains("passed=9 total=9"));
}
