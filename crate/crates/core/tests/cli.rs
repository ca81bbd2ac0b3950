//! End-to-end runs of the `convex` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn convex(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_convex"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const FIG1: &str = "(((a,b),c),(e,(f,g)),d);\n";

#[test]
fn count_figure_one() {
    for (k, want) in [("1", "233"), ("2", "8"), ("99", "0")] {
        let o = convex(&["count", "-", "-k", k], FIG1);
        assert!(o.status.success());
        assert_eq!(stdout(&o).lines().nth(1).unwrap().rsplit('\t').next().unwrap(), want);
    }
}

#[test]
fn list_count_agree_and_truncation_status() {
    let o = convex(&["list", "-", "-k", "2"], FIG1);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 8);
    let o = convex(&["list", "-", "-k", "3", "--limit", "1"], FIG1);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = convex(&["list", "-", "-k", "4"], FIG1);
    assert_eq!(stdout(&o), "a,b,c,d,e,f,g\n");
}

#[test]
fn gen_pipes_into_count() {
    let o = convex(&["gen", "fully_loaded", "7", "-k", "4"], "");
    assert!(o.status.success());
    let o = convex(&["count", "-", "-k", "4"], &stdout(&o));
    assert!(stdout(&o).ends_with("\t1\n"));
    let a = convex(&["gen", "random", "10", "--seed", "7"], "");
    let b = convex(&["gen", "random", "10", "--seed", "7"], "");
    assert_eq!(stdout(&a), stdout(&b));
    let o = convex(&["gen", "caterpillar", "9"], "");
    assert_eq!(stdout(&o), "(t1,(t2,(t3,(t4,(t5,(t6,(t7,(t8,t9))))))));\n".replace('t', "t0"));
}

#[test]
fn rate_rows() {
    let o = convex(&["rate"], "");
    let out = stdout(&o);
    assert!(out.contains("\n3\t1.272\t1.466\n"));
    assert!(out.contains("\n5\t1.128\t1.325\n"));
}

#[test]
fn exit_codes() {
    let o = convex(&["count", "-", "-k", "2"], "((a,b),(c,d);\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    let o = convex(&["frobnicate"], "");
    assert_eq!(o.status.code(), Some(2));
    let o = convex(&["gen", "fully_loaded", "3", "-k", "5"], "");
    assert_eq!(o.status.code(), Some(1));
    let o = convex(&["verify", "--nmax", "15"], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_modes() {
    let run = |json: &str| -> serde_json::Value {
        let o = convex(&["solve", "-"], json);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    let v = run(r#"{"trees": ["((a,b),(c,d),e);", "((a,b),(c,d),e);"], "k": 2, "mode": "agreement_forest_min_components"}"#);
    assert_eq!(v["objective_value"], "1");
    let v = run(r#"{"trees": ["((a,b),(c,d),(e,(f,g)));"], "mode": "quartet_exact_partition"}"#);
    assert!(v["character"].is_null());
    let v = run(r#"{"trees": ["((a,b),(c,d),e);"], "k": 1, "mode": "objective_optimize", "objective": "sum_parsimony"}"#);
    assert_eq!(v["objective_value"], "0");
    let o = convex(&["solve", "-"], r#"{"trees": ["((a,b),(c,d),e);"], "k": 1, "mode": "objective_optimize", "objective": "nope"}"#);
    assert_eq!(o.status.code(), Some(1));
    let o = convex(&["solve", "-"], r#"{"trees": ["((a,b),(c,d),e);", "((a,b),(c,x),e);"], "k": 1, "mode": "agreement_forest_min_components"}"#);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_and_verify() {
    let o = convex(&["bench", "--simulated", "--family", "caterpillar", "-k", "2,3", "--budget", "0.01"], "");
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 3);
    assert!(out.starts_with("family\tk\tbudget_s"));
    let o = convex(&["verify", "--nmax", "7", "--samples", "30", "--seed", "11"], "");
    assert!(o.status.success(), "{}", stdout(&o));
}
