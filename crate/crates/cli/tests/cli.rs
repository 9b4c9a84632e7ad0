use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn mimick(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mimick")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn gen_families() {
    let dir = TempDir::new().unwrap();
    let out = mimick(&["gen", "bipartite", "--k", "6"], dir.path());
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l.starts_with("p mimick 21 ")));

    let out = mimick(&["gen", "grid", "--k", "4"], dir.path());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("p mimick 24 ")));
    assert_eq!(text.lines().filter(|l| l.starts_with("r ")).count(), 24);

    let out = mimick(&["gen", "star", "--k", "3"], dir.path());
    assert!(stdout(&out).contains("p mimick 4 3 3"));
}

#[test]
fn randomized_commands_require_seed() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&mimick(&["gen", "random-planar", "--n", "10", "--k", "3"], dir.path())), 2);
    assert_eq!(code(&mimick(&["experiment", "tc-collision", "--k", "6"], dir.path())), 2);
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&mimick(&["gen", "bipartite", "--k", "4"], dir.path())), 2);
    fs::write(dir.path().join("bad.net"), "p mimick 2 1 2\nt 0 1\ne 0 5 1/1\n").unwrap();
    assert_eq!(code(&mimick(&["compress", "bad.net", "-o", "x.net"], dir.path())), 2);
    assert_eq!(code(&mimick(&["compress", "missing.net", "-o", "x.net"], dir.path())), 2);
}

#[test]
fn generation_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let args = ["gen", "random-planar", "--n", "20", "--k", "4", "--seed", "1"];
    assert_eq!(stdout(&mimick(&args, dir.path())), stdout(&mimick(&args, dir.path())));
}

#[test]
fn compress_then_verify() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&mimick(&["gen", "random-planar", "--n", "20", "--k", "4", "--seed", "1", "-o", "g.net"], d)), 0);
    for method in ["contract", "signature"] {
        let out = mimick(&["compress", "g.net", "--method", method, "-o", "small.net"], d);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        assert!(d.join("small.net.map").exists());
        let out = mimick(&["verify", "g.net", "small.net", "--generalized"], d);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).trim_end().ends_with("PASS"));
    }
}

#[test]
fn path_compresses_to_two_vertices() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("path.net"), "p mimick 3 2 2\nt 0 2\ne 0 1 3/1\ne 1 2 5/1\n").unwrap();
    assert_eq!(code(&mimick(&["compress", "path.net", "-o", "out.net"], d)), 0);
    let text = fs::read_to_string(d.join("out.net")).unwrap();
    assert!(text.starts_with("p mimick 2 1 2\n"));
    assert!(text.contains("e 0 1 3/1"));
}

#[test]
fn single_edge_is_unchanged() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let text = "p mimick 2 1 2\nt 0 1\ne 0 1 3/4\n";
    fs::write(d.join("e.net"), text).unwrap();
    assert_eq!(code(&mimick(&["compress", "e.net", "-o", "out.net"], d)), 0);
    assert_eq!(fs::read_to_string(d.join("out.net")).unwrap(), text);
}

#[test]
fn verify_reports_mismatch() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("a.net"), "p mimick 2 1 2\nt 0 1\ne 0 1 3/4\n").unwrap();
    fs::write(d.join("b.net"), "p mimick 2 1 2\nt 0 1\ne 0 1 1/1\n").unwrap();
    let out = mimick(&["verify", "a.net", "b.net", "--jsonl"], d);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains(r#""verdict":"FAIL""#));
    assert!(text.lines().next().unwrap().contains("mimick-report/1"));

    fs::write(d.join("c.net"), "p mimick 3 1 3\nt 0 1 2\ne 0 1 1/1\n").unwrap();
    assert_eq!(code(&mimick(&["verify", "a.net", "c.net"], d)), 2);
}

#[test]
fn experiments_pass() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let out = mimick(&["experiment", "rank", "--family", "grid", "--k", "4"], d);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("expected >= 9"));
    for args in [
        vec!["experiment", "grid-lemma", "--k", "3"],
        vec!["experiment", "bipartite-lemma", "--k", "6"],
        vec!["experiment", "bipartite-lemma", "--k", "9", "--spot", "3", "--seed", "2"],
        vec!["experiment", "tc-collision", "--k", "6", "--samples", "100", "--seed", "7"],
        vec!["experiment", "perturb", "--family", "grid", "--k", "3", "--scope", "all", "--seed", "0", "--count", "5"],
    ] {
        let out = mimick(&args, d);
        assert_eq!(code(&out), 0, "{args:?}\n{}", stdout(&out));
    }
    mimick(&["gen", "grid", "--k", "3", "-o", "g.net"], d);
    let out = mimick(&["experiment", "bounds", "--input", "g.net", "--seed", "1", "--jsonl"], d);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().last().unwrap().contains(r#""failed":0"#));
}

#[test]
fn terminal_cut_table() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("path.net"), "p mimick 3 2 3\nt 0 1 2\ne 0 1 3/1\ne 1 2 5/2\n").unwrap();
    assert_eq!(code(&mimick(&["tc", "build", "path.net", "-o", "p.tcs"], d)), 0);
    assert_eq!(&fs::read(d.join("p.tcs")).unwrap()[..4], b"TCS1");
    let query = |set: &str| stdout(&mimick(&["tc", "query", "p.tcs", "--set", set], d)).trim().to_string();
    assert_eq!(query("q2"), "11/2");
    assert_eq!(query("q1,q3"), "11/2");
    assert_eq!(query("q1"), "3/1");
    assert_eq!(query("q3"), "5/2");
    assert_eq!(code(&mimick(&["tc", "query", "p.tcs", "--set", "q1,q2,q3"], d)), 2);
    assert_eq!(code(&mimick(&["tc", "query", "p.tcs", "--set", "q7"], d)), 2);
}

#[test]
fn incidence_export() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("path.net"), "p mimick 3 2 3\nt 0 1 2\ne 0 1 3/1\ne 1 2 5/2\n").unwrap();
    let out = mimick(&["incidence", "path.net"], d);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("3 2"));
    assert_eq!(text.lines().count(), 1 + 3 + 3);
}
