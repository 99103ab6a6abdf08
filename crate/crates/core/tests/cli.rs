use std::path::Path;
use std::process::{Command, Output};

use liewords::counting::{eval_dfao, LinearRepresentation};
use liewords::golden::thue_morse;
use liewords::linalg::Q;
use liewords::word::Dfao;

fn liewords(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liewords")).args(args).env_remove("LIEWORDS_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data lines of a TSV table as `(n, column)` pairs.
fn column(out: &str, col: usize) -> Vec<(u64, String)> {
    out.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].parse().unwrap(), f[col].to_string())
        })
        .collect()
}

#[test]
fn thue_morse_complexity_table() {
    let o = liewords(&["complexity", "--word", "thue-morse", "--n", "0..16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "n\tp\tc\ta\tL\tcertified");
    let lie = column(&out, 4);
    assert_eq!(lie.len(), 17);
    assert_eq!(lie[2], (2, "3".to_string()));
    for (n, l) in lie {
        assert_eq!(l, thue_morse(n).to_string(), "n={n}");
    }
    assert!(out.lines().skip(1).all(|l| l.ends_with("\ttrue")));
}

#[test]
fn single_row_range() {
    let o = liewords(&["complexity", "--word", "thue-morse", "--n", "0..0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n\tp\tc\ta\tL\tcertified\n0\t1\t1\t1\t1\ttrue\n");
}

#[test]
fn json_rows() {
    let o = liewords(&["complexity", "--word", "fib", "--n", "1..3", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[0]["p"], 2);
}

#[test]
fn fibonacci_inequalities_hold() {
    let o = liewords(&["verify-inequalities", "--word", "fibonacci", "--n", "1..50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 51);
}

#[test]
fn cantor_rows_are_heuristic() {
    let o = liewords(&["verify-inequalities", "--word", "cantor", "--n", "1..8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with("\tfalse")));
    assert!(stderr(&o).contains("heuristic"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["complexity", "--word", "nope", "--n", "0..2"],
        vec!["complexity", "--n", "0..2"],
        vec!["complexity", "--word", "tm", "--dfao", "x.dfao", "--n", "0..2"],
        vec!["complexity", "--word", "tm", "--n", "5..2"],
        vec!["complexity", "--word", "tm", "--n", "0..2", "--cap", "0"],
        vec!["complexity", "--dfao", "/nonexistent/file", "--n", "0..2"],
        vec!["verify-inequalities", "--word", "tm", "--n", "0..2"],
        vec!["frobnicate"],
    ] {
        assert_eq!(liewords(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn honest_construction_overflows() {
    let o = liewords(&["construct", "--mode", "honest", "--depth", "4", "--f", "loglog"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ParameterOverflow"));
}

#[test]
fn toy_construction_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let o = liewords(&[
        "construct",
        "--mode",
        "toy",
        "--depth",
        "4",
        "--g",
        "2,2,2,2",
        "--n",
        "1..16",
        "--emit",
        trace.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("d\t2 5 13 34\n"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(v["invariants"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    assert_eq!(v["bound"]["rows"].as_array().unwrap().len(), 16);
}

#[test]
fn pipeline_emits_readable_files() {
    let dir = tempfile::tempdir().unwrap();
    let (rep, dfao) = (dir.path().join("lie.rep"), dir.path().join("lie.dfao"));
    let o = liewords(&[
        "pipeline",
        "--word",
        "tm",
        "--n",
        "0..40",
        "--emit-rep",
        rep.to_str().unwrap(),
        "--emit-dfao",
        dfao.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.ends_with("sup\t3\n"));
    let r = LinearRepresentation::parse(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    let d = Dfao::parse(&std::fs::read_to_string(&dfao).unwrap()).unwrap();
    for n in 0..=100 {
        assert_eq!(r.eval(n), Q::from_integer(thue_morse(n).into()));
        assert_eq!(eval_dfao(&d, n), thue_morse(n));
    }
    // Feeding the emitted automaton back as a sequence.
    let o = liewords(&["complexity", "--dfao", dfao.to_str().unwrap(), "--n", "3..3"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn logic_compile_lists_values() {
    let dir = tempfile::tempdir().unwrap();
    let formula = dir.path().join("squares.fol");
    std::fs::write(&formula, "# squares of length 2n at i\ndef sq(i,n) := n>0 & Aj j<n => W[i+j]=W[i+j+n]\nsq(i,n)\n")
        .unwrap();
    let o = liewords(&["logic", "compile", "--word", "tm", "--formula", formula.to_str().unwrap(), "--values", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    // Thue-Morse starts 0110: t[1] = t[2] but t[0] != t[1].
    let tail: Vec<&str> = out.lines().skip_while(|l| *l != "i\tn").skip(1).collect();
    assert!(tail.contains(&"1\t1"));
    assert!(!tail.contains(&"0\t1"));
    let named =
        liewords(&["logic", "compile", "--word", "tm", "--formula", formula.to_str().unwrap(), "--predicate", "sq"]);
    assert!(named.status.success());
    assert!(out.starts_with(&stdout(&named)));
    let missing =
        liewords(&["logic", "compile", "--word", "tm", "--formula", formula.to_str().unwrap(), "--predicate", "nope"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn algebra_check_and_scan() {
    let o = liewords(&["algebra-check", "--word", "vtm", "--n", "0..8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with("\ttrue")));
    let o = liewords(&["scan-powers", "--word", "cantor", "--exp", "4", "--max-root", "16", "--window", "16384"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "length\troot\n1\t0\n");
    let o = liewords(&["scan-powers", "--word", "fibonacci", "--exp", "4", "--max-root", "16", "--window", "16384"]);
    assert_eq!(stdout(&o), "length\troot\n");
}

#[test]
fn morphism_source() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("tm.morphism");
    std::fs::write(&m, "alphabet: a b\na -> ab\nb -> ba\n").unwrap();
    let o = liewords(&["complexity", "--morphism", m.to_str().unwrap(), "--seed", "a", "--n", "0..8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let tm = liewords(&["complexity", "--word", "tm", "--n", "0..8"]);
    assert_eq!(o.stdout, tm.stdout);
}

#[test]
fn output_is_deterministic_and_cache_is_transparent() {
    let args = ["complexity", "--word", "tribonacci", "--n", "0..30", "--format", "json"];
    let first = liewords(&args);
    assert_eq!(first.stdout, liewords(&args).stdout);
    let dir = tempfile::tempdir().unwrap();
    let run = |cache: &Path| {
        Command::new(env!("CARGO_BIN_EXE_liewords")).args(args).env("LIEWORDS_CACHE_DIR", cache).output().unwrap()
    };
    let cold = run(dir.path());
    assert_eq!(cold.stdout, first.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let warm = run(dir.path());
    assert_eq!(warm.stdout, first.stdout);
}

#[test]
fn golden_report_passes() {
    let o = liewords(&["golden"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("example6\tbrute-force\t2..40\t39\t0\tpass"));
    assert!(out.contains("cantor\tbrute-force\t1..50\t0\t0\theuristic"));
}
