mod common;

use std::fs;
use std::process::{Command, Output};

use common::*;
use tempfile::TempDir;

fn pathrdf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathrdf")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    data_file(name).to_string_lossy().into_owned()
}

struct Scratch {
    dir: TempDir,
}

impl Scratch {
    fn new() -> Self {
        Scratch {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> String {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }
}

#[test]
fn simple_query_prints_one_row() {
    let o = pathrdf(&["query", &data("genes.nt"), &data("genes.rq"), "--semantics", "simple"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "?x\t?y\t?z\ndm:bcd\tdm:tll\tdm:Kr\n");
}

#[test]
fn rdfs_modes_print_three_sorted_rows() {
    let s = Scratch::new();
    let both = s.file("gs.nt", &format!("{GENES}\n{SCHEMA}"));
    let expected = "?x\t?y\t?z\ndm:bcd\tdm:cad\tdm:kni\ndm:bcd\tdm:tll\tdm:Kr\ndm:hb\tdm:kni\tdm:Kr\n";
    for mode in ["rdfs-closure", "rdfs-psparql", "rdfs-nsparql", "rdfs-cpsparql"] {
        let o = pathrdf(&["query", &both, &data("genes.rq"), "--semantics", mode]);
        assert!(o.status.success(), "{mode}");
        assert_eq!(stdout(&o), expected, "{mode}");
    }
}

#[test]
fn travel_pairs_modulo_rdfs() {
    let o = pathrdf(&["query", &data("travel.nt"), &data("travel.rq"), "--semantics", "rdfs-nsparql"]);
    assert_eq!(stdout(&o), "?city1\t?city2\nex:Grenoble\tex:Amman\nex:Paris\tex:Amman\n");
}

#[test]
fn json_output_uses_null_for_unbound() {
    let s = Scratch::new();
    let q = s.file("q.rq", "SELECT ?x ?y WHERE { ?x type rn:gene OPTIONAL { ?x rn:promotes ?y } }");
    let o = pathrdf(&["query", &data("genes.nt"), &q, "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vars"], serde_json::json!(["x", "y"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.contains(&serde_json::json!(["dm:tll", null])));
    let tsv = stdout(&pathrdf(&["query", &data("genes.nt"), &q]));
    assert!(tsv.lines().any(|l| l == "dm:tll\t"), "{tsv}");
}

#[test]
fn output_is_deterministic() {
    let args = ["query", &data("travel.nt"), &data("travel.rq"), "--semantics", "rdfs-cpsparql"];
    let first = pathrdf(&args).stdout;
    for _ in 0..3 {
        assert_eq!(pathrdf(&args).stdout, first);
    }
}

#[test]
fn exit_codes() {
    let s = Scratch::new();
    let bad_data = s.file("bad.nt", "ex:a ex:p .");
    let bad_query = s.file("bad.rq", "SELECT ?x WHERE { ?x ex:p }");
    let path_query = s.file("path.rq", "SELECT ?x WHERE { ?x (next::ex:p)+ ?y }");
    assert_eq!(pathrdf(&["query", &bad_data, &data("genes.rq")]).status.code(), Some(1));
    assert_eq!(pathrdf(&["query", &data("genes.nt"), &bad_query]).status.code(), Some(1));
    assert_eq!(pathrdf(&["query", &data("genes.nt"), &data("genes.rq"), "--semantics", "nope"]).status.code(), Some(1));
    assert_eq!(pathrdf(&["query", "/no/such/file", &data("genes.rq")]).status.code(), Some(1));
    let o = pathrdf(&["query", &data("genes.nt"), &path_query, "--semantics", "rdfs-closure"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn closure_writes_the_saturated_graph() {
    let s = Scratch::new();
    let input = s.file("gs.nt", &format!("{GENES}\n{SCHEMA}"));
    let out = s.dir.path().join("closed.nt");
    let o = pathrdf(&["closure", &input, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "16 derived triples\n");
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l == "dm:hb rn:regulates dm:kni ."), "{text}");
}

#[test]
fn closure_of_nothing() {
    let s = Scratch::new();
    let empty = s.file("empty.nt", "");
    let o = pathrdf(&["closure", &empty]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");
    assert_eq!(String::from_utf8_lossy(&o.stderr), "0 derived triples\n");
}

#[test]
fn closure_counts_subproperty_chain() {
    let s = Scratch::new();
    let chain = s.file("chain.nt", "ex:p1 sp ex:p2 .\nex:p2 sp ex:p3 .\nex:p3 sp ex:p4 .\nex:p4 sp ex:p5 .\nex:p5 sp ex:p6 .");
    let out = s.dir.path().join("c.nt");
    let o = pathrdf(&["closure", &chain, "--out", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), "10 derived triples\n");
    let o = pathrdf(&["closure", &chain, "--reflexive", "--extended", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn closure_cap_from_environment() {
    let s = Scratch::new();
    let chain = s.file("chain.nt", "ex:p1 sp ex:p2 .\nex:p2 sp ex:p3 .\nex:p3 sp ex:p4 .");
    let o = Command::new(env!("CARGO_BIN_EXE_pathrdf"))
        .args(["closure", &chain])
        .env("PATHRDF_TRIPLE_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("more than 1 derived"));
}

#[test]
fn rewrite_modes() {
    let o = pathrdf(&["rewrite", &data("genes.rq"), "--mode", "nsparql-phi"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("?x next::[(next::sp)*/self::rn:inhibits] ?y"), "{text}");
    pathrdf::query::parse_query(&text).unwrap();
    let o = pathrdf(&["rewrite", &data("genes.rq"), "--mode", "psparql-tau"]);
    assert!(stdout(&o).contains("?f1 sp* rn:inhibits"));
    let o = pathrdf(&["rewrite", &data("variable_predicate.rq"), "--mode", "nsparql-phi"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("?p"));
}

#[test]
fn bench_csv() {
    let o = pathrdf(&["bench", "--shape", "chain", "--sizes", "0,50", "--expr", "(next::p)+"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "size,triples,pairs,millis");
    assert!(lines[1].starts_with("0,0,0,"));
    assert!(lines[2].starts_with("50,50,1275,"));
    let o = pathrdf(&["bench", "--shape", "grid", "--sizes", "30", "--expr", "next/next"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("30,1740,2521,"));
    let o = pathrdf(&["bench", "--shape", "chain", "--sizes", "100", "--expr", "(next::p)+", "--endpoints"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("100,100,1,"));
}
