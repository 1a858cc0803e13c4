//! End-to-end checks of the `rdss` binary: report output, artifacts that
//! parse and re-verify, and the documented exit codes.

use std::path::Path;
use std::process::{Command, Output};

use rdss::code::{verify_rdss, Code};
use rdss::duality::CoveringFamily;
use rdss::graph::Graph;

const PENTAGON: &str = "p rdss 5 5 u\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 0\n";
const TRIANGLE_D: &str = "p rdss 3 3 d\ne 0 1\ne 1 2\ne 2 0\n";

fn rdss(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdss"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn exit(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn capacity_emits_verifiable_artifact() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), PENTAGON).unwrap();
    let out = rdss(dir.path(), &["capacity", "g.txt", "--out", "art"]);
    assert_eq!(exit(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("rdss-report 1\n"), "unexpected report header: {text}");
    assert!(text.contains("codewords: 5"), "missing codeword count: {text}");
    let artifact = std::fs::read_to_string(dir.path().join("art/capacity-code.txt")).unwrap();
    let code = Code::parse(&artifact).expect("artifact parses");
    let g = Graph::parse(PENTAGON).unwrap();
    assert!(verify_rdss(&g, &code).unwrap().is_ok(), "artifact code fails verification");
}

#[test]
fn bounds_reports_interval() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), PENTAGON).unwrap();
    let out = rdss(dir.path(), &["bounds", "g.txt"]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(
        text.contains("interval-lower:") && text.contains("interval-upper:"),
        "missing interval lines: {text}"
    );
}

#[test]
fn verify_distinguishes_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), PENTAGON).unwrap();
    std::fs::write(
        dir.path().join("good.txt"),
        "c rdss 5 2 2\n00000\n11011\n",
    )
    .unwrap();
    // 00001 and 00000 agree on N(4) = {0, 3} but differ at vertex 4.
    std::fs::write(
        dir.path().join("bad.txt"),
        "c rdss 5 2 2\n00000\n00001\n",
    )
    .unwrap();
    let good = rdss(dir.path(), &["verify", "g.txt", "good.txt"]);
    assert_eq!(exit(&good), 0, "good code rejected: {}", stdout(&good));
    let bad = rdss(dir.path(), &["verify", "g.txt", "bad.txt"]);
    assert_eq!(exit(&bad), 1, "bad code not flagged");
    assert!(stdout(&bad).contains("result: fail"), "missing failure line: {}", stdout(&bad));
}

#[test]
fn construct_lp_reports_packing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), TRIANGLE_D).unwrap();
    let out = rdss(dir.path(), &["construct", "g.txt", "--method", "lp", "--out", "art"]);
    assert_eq!(exit(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("packing-value: 1"), "missing packing value: {text}");
    assert!(dir.path().join("art/vector-code.txt").exists());
}

#[test]
fn construct_rejects_wrong_directedness() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), PENTAGON).unwrap();
    let out = rdss(dir.path(), &["construct", "g.txt", "--method", "cycles"]);
    assert_eq!(exit(&out), 5, "undirected graph should be a usage error for --method cycles");
}

#[test]
fn dualize_round_trips_and_saves_covering() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), PENTAGON).unwrap();
    std::fs::write(
        dir.path().join("c.txt"),
        "c rdss 5 2 5\n00000\n01100\n00011\n11011\n11101\n",
    )
    .unwrap();
    let out = rdss(dir.path(), &["dualize", "g.txt", "c.txt", "--out", "art"]);
    assert_eq!(exit(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("roundtrip: pass"), "round trip failed: {}", stdout(&out));
    let saved = std::fs::read_to_string(dir.path().join("art/covering.txt")).unwrap();
    CoveringFamily::parse(2, 5, &saved).expect("covering artifact parses");
}

#[test]
fn minrank_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), PENTAGON).unwrap();
    let out = rdss(dir.path(), &["minrank", "g.txt"]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("minrank: 3"), "wrong minrank: {}", stdout(&out));
}

#[test]
fn parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), "p wrong header\n").unwrap();
    let out = rdss(dir.path(), &["bounds", "g.txt"]);
    assert_eq!(exit(&out), 2);
    let missing = rdss(dir.path(), &["bounds", "nope.txt"]);
    assert_eq!(exit(&missing), 2);
}

#[test]
fn cap_exceeded_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), PENTAGON).unwrap();
    let out = rdss(dir.path(), &["capacity", "g.txt", "--state-cap", "8"]);
    assert_eq!(exit(&out), 4, "tiny state cap should trip the cap exit");
    assert!(stdout(&out).contains("notice:"), "missing fallback notice: {}", stdout(&out));
}

#[test]
fn usage_error_exits_5_and_help_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let usage = rdss(dir.path(), &["no-such-subcommand"]);
    assert_eq!(exit(&usage), 5);
    let help = rdss(dir.path(), &["--help"]);
    assert_eq!(exit(&help), 0);
}
