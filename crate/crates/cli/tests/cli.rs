use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-loops"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture_args<'a>(cmd: &'a str, dir: &str, extra: &[&'a str]) -> Vec<String> {
    let d = fixtures().join(dir);
    let mut v = vec![
        cmd.to_string(),
        "--surface".into(),
        d.join("surface.json").display().to_string(),
        "--arc".into(),
        d.join("arc.json").display().to_string(),
    ];
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run_fixture(cmd: &str, dir: &str, extra: &[&str]) -> String {
    let args = fixture_args(cmd, dir, extra);
    let out = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(dir: &str, name: &str) -> String {
    fs::read_to_string(fixtures().join(dir).join(name)).unwrap()
}

#[test]
fn expand_matches_golden_output() {
    for dir in ["fig10", "fig12"] {
        assert_eq!(
            run_fixture("expand", dir, &["--emit-matchings"]),
            golden(dir, "expand.golden"),
            "{dir}"
        );
    }
}

#[test]
fn lattice_matches_golden_output() {
    for (dir, n) in [("fig10", 15), ("fig12", 12)] {
        let dot = run_fixture("lattice", dir, &[]);
        assert_eq!(dot, golden(dir, "lattice.dot.golden"), "{dir}");
        assert_eq!(
            dot.lines()
                .filter(|l| l.trim_start().starts_with('m') && !l.contains("->"))
                .count(),
            n
        );
    }
}

#[test]
fn dot_output_goes_to_a_file() {
    let path = std::env::temp_dir().join(format!("cluster-loops-quiver-{}.dot", std::process::id()));
    let p = path.display().to_string();
    run_fixture("lattice", "fig12", &["--graph", "quiver", "--dot-output", &p]);
    let dot = fs::read_to_string(&path).unwrap();
    fs::remove_file(&path).unwrap();
    assert!(dot.starts_with("digraph quiver"));
    assert_eq!(dot.matches("->").count(), 7);
}

#[test]
fn bijection_is_reported() {
    let out = run_fixture("verify-bijection", "fig12", &[]);
    assert!(out.contains("pairs 12 good 12"), "{out}");
    assert!(out.contains("expansions agree yes"), "{out}");
    let out = run_fixture("verify-bijection", "fig10", &[]);
    assert!(out.contains("expansions agree yes"), "{out}");
}

#[test]
fn stored_oracle_cases_agree() {
    let cases = fixtures().join("oracle/cases.json").display().to_string();
    let out = run(&["oracle", "--cases", &cases]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 10);
    assert!(text.lines().all(|l| l.starts_with("agree ")), "{text}");
}

#[test]
fn selftest_passes_on_a_small_run() {
    let out = run(&["selftest", "--cases", "10", "--seed", "7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(
        text.lines().any(|l| l.starts_with("pass mutation-involution")),
        "{text}"
    );
    assert!(!text.lines().any(|l| l.starts_with("FAIL")), "{text}");
}

#[test]
fn missing_file_is_an_io_error() {
    let out = run(&[
        "expand",
        "--surface",
        "/nonexistent/surface.json",
        "--arc",
        "/nonexistent/arc.json",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("code=io"), "{err}");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("code=usage"));
}
