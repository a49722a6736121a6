use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hslnest")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn axioms_prints_the_instance() {
    let o = run(&["axioms", "--hsl", "2,1", "--grammar"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(<><>[]p -> []p) & (<>p -> [][]<>p)"), "{out}");
    assert!(out.contains("{d -> bbd, b -> bdd}"), "{out}");
}

#[test]
fn pairs_out_of_range_are_usage_errors() {
    assert_eq!(run(&["axioms", "--hsl", "10,1"]).status.code(), Some(2));
    assert_eq!(run(&["prove", "--depth", "3", "--axioms", "1,12", "p -> p"]).status.code(), Some(2));
}

#[test]
fn reach_reports_witness_or_failure() {
    let o = run(&["reach", "--hsl", "2,1", "v R u, u R w", "w", "u"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("w, b, u, b, v, d, u"));
    assert_eq!(run(&["reach", "v R u", "u", "v"]).status.code(), Some(1));
}

#[test]
fn prove_check_translate_refine() {
    let dir = TempDir::new().unwrap();
    let nested = dir.path().join("n.json");
    let labelled = dir.path().join("l.json");
    let back = dir.path().join("back.json");
    let path = |p: &std::path::Path| p.to_str().unwrap().to_string();

    let o = run(&["prove", "--hsl", "1,1", "--depth", "12", "--json", "-o", &path(&nested), "<>[]p -> []p"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&["check", "--hsl", "1,1", "--calculus", "nested", &path(&nested)]).status.code(), Some(0));
    assert_eq!(run(&["check", "--calculus", "nested", &path(&nested)]).status.code(), Some(1));

    let o = run(&["translate", "--hsl", "1,1", "--to", "labelled", &path(&nested), "-o", &path(&labelled)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&["check", "--hsl", "1,1", "--calculus", "refined", &path(&labelled)]).status.code(), Some(0));
    let o = run(&["refine", "--hsl", "1,1", &path(&labelled), "-o", &path(&back)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["translate", "--hsl", "1,1", "--to", "nested", &path(&back)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), fs::read_to_string(&nested).unwrap().trim());
}

#[test]
fn bad_rule_name_is_located() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("p.json");
    let o = run(&["prove", "--d", "--depth", "8", "--json", "-o", file.to_str().unwrap(), "[]p -> <>p"]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&file).unwrap().replacen("\"d\"", "\"dd\"", 1);
    fs::write(&file, text).unwrap();
    let o = run(&["check", "--d", "--calculus", "nested", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let msg = format!("{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(msg.contains("node [0]") && msg.contains("dd"), "{msg}");
}

#[test]
fn sequent_translation_both_ways() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("s.txt");
    fs::write(&file, "p -> q^o, [p^i, [[]p^i]]").unwrap();
    let o = run(&["translate", "--to", "labelled", file.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "w0 R w1, w1 R w2 ; w1: p, w2: []p |- w0: p -> q");
    fs::write(&file, "w R v, v R u ; v: p, u: []p |- w: p -> q").unwrap();
    let o = run(&["translate", "--to", "nested", file.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "p -> q^o, [ p^i, [ []p^i ] ]");
}

#[test]
fn model_eval_is_seeded() {
    let a = run(&["model-eval", "--formula", "<>[]p -> []p", "--seed", "7"]);
    let b = run(&["model-eval", "--formula", "<>[]p -> []p", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(run(&["model-eval", "--hsl", "1,1", "--formula", "<>[]p -> []p"]).status.code(), Some(0));
}

#[test]
fn model_file_and_sequent() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("m.txt");
    fs::write(&file, "worlds a b\nleq a a\nleq b b\nacc a b\nval b p\n").unwrap();
    let m = file.to_str().unwrap();
    let o = run(&["model-eval", "--model", m, "--formula", "<>p", "--world", "a"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(run(&["model-eval", "--model", m, "--formula", "<>p", "--world", "b"]).status.code(), Some(1));
    let o = run(&["model-eval", "--model", m, "--sequent", "x R y |- x: <>p", "--interp", "x=a, y=b"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
