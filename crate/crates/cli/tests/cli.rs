use std::fs;
use std::process::{Command, Output};

fn tenfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tenfold"))
        .args(args)
        .output()
        .expect("run tenfold")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn default_alphabet_prints_tenfold_gf() {
    let o = tenfold(&["--a", "3", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict true\n"));
    assert!(out.contains("gf 1/(1-10*x^5)\n"));
    assert!(out.contains("cross-check ok 20\n"));
}

#[test]
fn one_one() {
    let o = tenfold(&["pipeline", "--a", "1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gf 1/(1-2*x^2)\n"));
}

#[test]
fn vertex_limit_exits_two_with_partial_tree() {
    let o = tenfold(&["--a", "3", "--b", "2", "--max-vertices", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("partial tree with 1 vertices"), "{err}");
    assert!(err.contains("ab 3 2 corpus 20"));
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        &["--a", "4", "--b", "2"][..],
        &["--a", "0", "--b", "1"],
        &["--no-such-flag"],
        &["--a", "3", "--b", "2", "--series-order", "0"],
        &["prove", "--grammar-file", "/nonexistent/grammar.txt"],
    ] {
        assert_eq!(tenfold(args).status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn runs_are_byte_identical() {
    for format in ["text", "structured"] {
        let args = [
            "--a",
            "3",
            "--b",
            "2",
            "--verbosity",
            "very-verbose",
            "--format",
            format,
        ];
        let (x, y) = (tenfold(&args), tenfold(&args));
        assert_eq!(x.status.code(), Some(0));
        assert_eq!(x.stdout, y.stdout);
    }
}

#[test]
fn verbosity_tiers_nest() {
    let run = |v: &str| stdout(&tenfold(&["--a", "2", "--b", "1", "--verbosity", v]));
    let (terse, verbose, very) = (run("terse"), run("verbose"), run("very-verbose"));
    assert!(!terse.contains("leaf "));
    assert!(verbose.contains("PROVED") && !verbose.contains("obligation"));
    assert!(very.contains("obligation") && very.contains("round 0 survivors"));
    assert!(terse.lines().count() < verbose.lines().count());
    assert!(verbose.lines().count() < very.lines().count());
}

#[test]
fn structured_output_is_one_document() {
    let o = tenfold(&["--a", "3", "--b", "2", "--format", "structured"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["gf"], "1/(1-10*x^5)");
    assert_eq!(doc["proof"]["verdict"], "true");
    assert_eq!(doc["grammar"]["a"], 3);
    assert_eq!(doc["cross_check"], true);
}

#[test]
fn grammar_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g32.txt");
    let p = path.to_str().unwrap();
    let o = tenfold(&["pipeline", "--grammar-file", p]);
    assert_eq!(o.status.code(), Some(0));
    let first = fs::read_to_string(&path).unwrap();
    assert!(first.starts_with("ab 3 2 corpus 20\n"));

    let o = tenfold(&["prove", "--grammar-file", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("verdict true\n"));
    let o = tenfold(&["gf", "--grammar-file", p]);
    assert!(stdout(&o).starts_with("gf 1/(1-10*x^5)\n"));

    let other = dir.path().join("again.txt");
    tenfold(&["discover", "--grammar-file", other.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(&other).unwrap(), first);
}

#[test]
fn tampered_grammar_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    tenfold(&["discover", "--a", "2", "--b", "1", "--grammar-file", p]);
    let text = fs::read_to_string(&path).unwrap();
    // Send the root's first child out of range.
    let broken = text.replacen("| 1,2 |", "| 1,99 |", 1);
    assert_ne!(broken, text);
    fs::write(&path, broken).unwrap();
    let o = tenfold(&["prove", "--a", "2", "--b", "1", "--grammar-file", p]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dangling"));
}

#[test]
fn wrong_alphabet_for_grammar_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    tenfold(&["discover", "--a", "2", "--b", "1", "--grammar-file", p]);
    assert_eq!(tenfold(&["gf", "--grammar-file", p]).status.code(), Some(3));
}

#[test]
fn count_and_conjecture() {
    let o = tenfold(&["count", "--a", "3", "--b", "2", "--length", "15"]);
    assert_eq!(stdout(&o), "15 1000\n");
    let o = tenfold(&["conjecture", "--a", "3", "--b", "2", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("3 15 1000 1000 true\n"), "{out}");
    assert!(out.contains("empirical"));
}
