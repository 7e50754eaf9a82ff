use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../descriptors").join(name)
}

fn symsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = symsum(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn invariants_p1_and_s2xs2() {
    let (code, out, _) = run(&["invariants", &path("p1.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("c1^2 = -4, c2 = 16"), "{out}");
    assert!(out.contains("square 0, K·F 2, genus 2"), "{out}");
    let (code, out, _) = run(&["invariants", &path("s2xs2.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("c1^2 = 8, c2 = 4"), "{out}");
}

#[test]
fn malformed_descriptor_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.toml");
    std::fs::write(&f, "name = \"X\"\nkind = \"rationnal\"\nn = 3\n").unwrap();
    let (code, out, err) = run(&["invariants", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 2") && err.contains("unknown kind"), "{err}");

    std::fs::write(&f, "kind = \"rational\"\nn = 3\n[[surface]]\nname = \"F\"\nclass = [1, 0]\n").unwrap();
    let (code, _, err) = run(&["invariants", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 5"), "{err}");

    let (code, _, _) = run(&["invariants", "/nonexistent/file.toml"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["--degree-bound", "0", "invariants", &path("p1.toml")]);
    assert_eq!(code, 2);
}

#[test]
fn knef_examples_and_oracle() {
    let (code, out, _) = run(&["knef", &path("s2xs2.toml"), "F", "--oracle"]);
    assert_eq!(code, 0);
    assert!(out.contains("knef") && out.contains("c = F·f = 2 >= 2") && out.contains("agreement: yes"), "{out}");

    let (code, out, _) = run(&["knef", &path("torus_ruled.toml"), "section", "--oracle"]);
    assert_eq!(code, 1);
    assert!(out.contains("ruled section exception"), "{out}");
    assert!(out.contains("oracle: violation f") && out.contains("agreement: yes"), "{out}");

    let (code, out, _) = run(&["knef", &path("e1.toml"), "F", "--oracle"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("agreement: yes"));

    let (code, out, _) = run(&["knef", &path("e1_blown.toml"), "F"]);
    assert_eq!(code, 1);
    assert!(out.contains("witness: E10"), "{out}");

    let (code, _, err) = run(&["knef", &path("e1.toml"), "G"]);
    assert_eq!(code, 2);
    assert!(err.contains("no surface named"), "{err}");
}

#[test]
fn oracle_disagreement_exits_3() {
    // Asserted b+ = 3 on a lattice where the box search finds a class the
    // certificate never looks at.
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("odd.toml");
    std::fs::write(
        &f,
        r#"name = "odd"
kind = "general"
basis = ["H", "E"]
gram = [[1, 0], [0, -1]]
canonical = [-3, 1]
omega = [2, -1]
b1 = 0
b_plus = 3
b_minus = 3
minimal = true
minimal_model_kind = "neither"
exceptional = []

[[surface]]
name = "F"
class = [3, 0]
"#,
    )
    .unwrap();
    let (code, out, err) = run(&["knef", f.to_str().unwrap(), "F", "--oracle"]);
    assert_eq!(code, 3, "{out}{err}");
    assert!(out.contains("agreement: NO"));
    let (code, _, _) = run(&["knef", f.to_str().unwrap(), "F"]);
    assert_eq!(code, 0);
}

#[test]
fn sum_exit_codes() {
    let cases = [
        ("e1_e1.sum.toml", 0, "minimal (case iii)"),
        ("p1_p1.sum.toml", 0, "c1^2 = 0, c2 = 36"),
        ("blown_e1.sum.toml", 1, "side 1: F·(E10) = 0"),
        ("ruled_e1.sum.toml", 1, "resolution: not minimal"),
        ("ruled_unknown.sum.toml", 4, "resolution: unresolved"),
    ];
    for (file, want, text) in cases {
        let (code, out, err) = run(&["sum", &path(file)]);
        assert_eq!(code, want, "{file}: {out}{err}");
        assert!(out.contains(text), "{file}: {out}");
    }
}

#[test]
fn splittings_in_report() {
    let (code, out, _) = run(&["--coeff-bound", "6", "sum", &path("blown_e1.sum.toml"), "--splittings"]);
    assert_eq!(code, 1);
    assert!(out.contains("A1 = E10, A2 = 0, d = 0"), "{out}");
    let (code, out, _) = run(&["--coeff-bound", "6", "sum", &path("e1_e1.sum.toml"), "--splittings"]);
    assert_eq!(code, 0);
    assert!(out.contains("splittings (coefficients in [-6, 6]): 0"), "{out}");
}

#[test]
fn reports_do_not_depend_on_jobs() {
    for args in [
        vec!["sum", "--splittings"],
        vec!["--format", "json", "sum", "--splittings"],
    ] {
        let mut outs = Vec::new();
        for jobs in ["1", "4"] {
            let mut a: Vec<String> = vec!["--jobs".into(), jobs.into(), "--coeff-bound".into(), "5".into()];
            a.extend(args.iter().map(|s| s.to_string()));
            a.insert(a.len() - 1, path("ruled_e1.sum.toml"));
            let refs: Vec<&str> = a.iter().map(String::as_str).collect();
            let out = symsum(&refs);
            outs.push(out.stdout);
        }
        assert!(!outs[0].is_empty());
        assert_eq!(outs[0], outs[1]);
    }
}

#[test]
fn json_is_parseable() {
    let out = symsum(&["--format", "json", "knef", &path("s2xs2.toml"), "F", "--oracle"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificate"]["verdict"], "knef");
    assert_eq!(v["agreement"], true);
}

#[test]
fn geography_commands() {
    let (code, out, _) = run(&["geography", "chain", "s11"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("verdict: minimal (case iii)").count(), 2, "{out}");
    let (code, out, _) = run(&["geography", "chain", "P1", "P1"]);
    assert_eq!(code, 0);
    assert!(out.contains("c1² = 0, c2 = 36"), "{out}");
    let (code, out, _) = run(&["geography", "region", "--a", "0:48", "--b", "0:48"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# a in [0, 48], b in [0, 48], r = 0: 153 pairs\n"));
    assert_eq!(out.lines().count(), 154);
    let (code, out, _) = run(&["geography", "blocks"]);
    assert_eq!(code, 0);
    assert!(!out.contains("FAIL"));
    for b in ["M_G", "P1", "P2", "Q1", "Q2", "S11", "CP2_8"] {
        assert!(out.contains(b), "{b}");
    }
    let (code, _, _) = run(&["geography", "blocks", "P7"]);
    assert_eq!(code, 2);
}

#[test]
fn stress_commands() {
    let (code, out, _) = run(&["--coeff-bound", "5", "stress", "possquare", "--n", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("0 counterexamples").count(), 2, "{out}");
    let (code, _, _) = run(&["stress", "integer"]);
    assert_eq!(code, 0);
    let a = symsum(&["--seed", "9", "stress", "light-cone", "--samples", "300"]);
    let b = symsum(&["--seed", "9", "stress", "light-cone", "--samples", "300"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
