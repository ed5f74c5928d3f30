use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use tempfile::TempDir;

fn run(args: &[&str]) -> (u8, String, String) {
    run_with_stdin(args, "")
}

fn run_with_stdin(args: &[&str], input: &str) -> (u8, String, String) {
    let mut argv = vec!["wassalg"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = wassalg_cli::run(argv, &mut input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Files {
    _dir: TempDir,
    a: PathBuf,
    b: PathBuf,
    mix_a: PathBuf,
    mix_b: PathBuf,
    bad: PathBuf,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    Files {
        a: write(d, "a.json", r#"{"space": "line", "atoms": [2], "weights": [1]}"#),
        b: write(d, "b.json", r#"{"space": "line", "atoms": [5], "weights": [1]}"#),
        mix_a: write(d, "mix_a.json", r#"{"space": "line", "atoms": [0, 1, 3], "weights": ["1/3", "1/3", "1/3"]}"#),
        mix_b: write(d, "mix_b.json", r#"{"space": "line", "atoms": [0.5, 2], "weights": [0.25, 0.75]}"#),
        bad: write(d, "bad.json", r#"{"space": "line", "atoms": [0, 1], "weights": [0.5, 0.4]}"#),
        _dir: dir,
    }
}

#[test]
fn distance_between_diracs_prints_three() {
    let f = files();
    let (code, out, _) = run(&["distance", "--p", "1", s(&f.a), s(&f.b)]);
    assert_eq!((code, out.as_str()), (0, "3\n"));
    let (code, out, _) = run(&["--mode", "exact", "distance", "--p", "2", "--format", "csv", s(&f.a), s(&f.b)]);
    assert_eq!(code, 0);
    assert_eq!(out, "p,mode,cost_p,wp\n2,exact,9,3\n");
}

#[test]
fn barycentric_laws_report_no_failures() {
    let (code, out, err) = run(&["laws", "--set", "barycentric", "--trials", "1000", "--p", "2", "--seed", "7"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("SA") && out.contains("barycentre"));
    assert!(out.lines().all(|l| l.contains("failures=0 ")), "{out}");
}

#[test]
fn validate_reports_normalization() {
    let f = files();
    let (code, out, err) = run(&["validate", s(&f.bad)]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("weights sum to"), "{err}");
    let (code, out, _) = run(&["validate", s(&f.mix_a)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("ok: line measure, 3 atoms"));
}

#[test]
fn usage_errors_exit_two() {
    let f = files();
    assert_eq!(run(&["distance", "--p", "0.5", s(&f.a), s(&f.b)]).0, 2);
    assert_eq!(run(&["--mode", "exact", "distance", "--p", "1.5", s(&f.a), s(&f.b)]).0, 2);
    assert_eq!(run(&["laws", "--set", "nonsense"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["distance", s(&f.a)]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("distance"));
}

#[test]
fn missing_file_is_a_domain_error() {
    assert_eq!(run(&["distance", "/nonexistent/a.json", "/nonexistent/b.json"]).0, 1);
}

#[test]
fn coupling_output_revalidates() {
    let f = files();
    for mode in ["float", "exact"] {
        let (code, csv, err) = run(&["--mode", mode, "coupling", "--p", "2", s(&f.mix_a), s(&f.mix_b)]);
        assert_eq!(code, 0, "{err}");
        let dir = TempDir::new().unwrap();
        let path = write(dir.path(), "c.csv", &csv);
        let (code, out, err) = run(&["--mode", mode, "validate", s(&path), "--against", s(&f.mix_a), s(&f.mix_b)]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("marginals match"));
        // swapped marginals must not validate
        let (code, _, _) = run(&["--mode", mode, "validate", s(&path), "--against", s(&f.mix_b), s(&f.mix_a)]);
        assert_eq!(code, 1);
    }
}

#[test]
fn exact_coupling_is_rational() {
    let f = files();
    let (_, csv, _) = run(&["--mode", "exact", "coupling", "--p", "1", s(&f.mix_a), s(&f.mix_b)]);
    assert_eq!(csv.lines().next().unwrap(), ",1/2,2");
    assert!(csv.contains("1/4"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["laws", "--set", "wasserstein", "--trials", "50", "--seed", "3", "--format", "csv"];
    let first = run(&args);
    assert_eq!(first, run(&args));
    let other = run(&["laws", "--set", "wasserstein", "--trials", "50", "--seed", "4", "--format", "csv"]);
    assert_ne!(first.1, other.1);
    let exp = ["experiment", "dirichlet-cauchy", "--schedule", "2,4,8"];
    assert_eq!(run(&exp), run(&exp));
}

#[test]
fn stdin_and_out_file() {
    let f = files();
    let doc = fs::read_to_string(&f.a).unwrap();
    let (code, out, _) = run_with_stdin(&["distance", "-", s(&f.b)], &doc);
    assert_eq!((code, out.as_str()), (0, "3\n"));
    assert_eq!(run_with_stdin(&["distance", "-", "-"], &doc).0, 2);
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("out.txt");
    let (code, out, _) = run(&["distance", s(&f.a), s(&f.b), "--out", s(&target)]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(fs::read_to_string(target).unwrap(), "3\n");
}

#[test]
fn experiments_render_all_formats() {
    for format in ["text", "csv", "json"] {
        let (code, out, err) = run(&["experiment", "moment-growth", "--m-max", "4", "--format", format]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("moment"));
    }
    let (code, out, _) = run(&["--mode", "exact", "experiment", "density", "--grid", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    assert_eq!(run(&["--mode", "exact", "experiment", "dirichlet-cauchy"]).0, 2);
    let (code, out, _) = run(&["experiment", "moment-convergence", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().skip(1).all(|l| l.contains(",true,true,")));
}

#[test]
fn binary_honours_environment_overrides() {
    let f = files();
    let mut child = Command::new(env!("CARGO_BIN_EXE_wassalg"))
        .args(["distance", "-", s(&f.b), "--format", "csv"])
        .env("WASSALG_P", "3")
        .env("WASSALG_MODE", "exact")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(fs::read(&f.a).unwrap().as_slice())
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "p,mode,cost_p,wp\n3,exact,27,3\n");
    let status = Command::new(env!("CARGO_BIN_EXE_wassalg"))
        .args(["validate", s(&f.bad)])
        .stderr(Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
