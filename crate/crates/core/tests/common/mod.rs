#![allow(dead_code)]

use std::path::PathBuf;

use pathrdf::ntriples::parse_ntriples;
use pathrdf::query::{parse_query, Query};
use pathrdf::{Graph, Term, Triple};

pub const GENES: &str = include_str!("../data/genes.nt");
pub const SCHEMA: &str = include_str!("../data/schema.nt");
pub const TRAVEL: &str = include_str!("../data/travel.nt");
pub const GENES_QUERY: &str = include_str!("../data/genes.rq");
pub const TRAVEL_QUERY: &str = include_str!("../data/travel.rq");
pub const TRAVEL_RDFS_QUERY: &str = include_str!("../data/travel_rdfs.rq");

pub fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn genes() -> Graph {
    parse_ntriples(GENES).unwrap()
}

pub fn genes_and_schema() -> Graph {
    parse_ntriples(&format!("{GENES}\n{SCHEMA}")).unwrap()
}

pub fn travel() -> Graph {
    parse_ntriples(TRAVEL).unwrap()
}

/// The counterexample graph {⟨u,s,2⟩, ⟨v,s,4⟩}.
pub fn two_literals() -> Graph {
    parse_ntriples("ex:u ex:s \"2\" .\nex:v ex:s \"4\" .").unwrap()
}

pub fn fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("genes", genes()),
        ("genes+schema", genes_and_schema()),
        ("travel", travel()),
        ("two-literals", two_literals()),
    ]
}

pub fn query(text: &str) -> Query {
    parse_query(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn dm(local: &str) -> Term {
    Term::iri(format!("http://example.org/dm#{local}"))
}

pub fn rn(local: &str) -> Term {
    Term::iri(format!("http://example.org/rn#{local}"))
}

pub fn ex(local: &str) -> Term {
    Term::iri(format!("http://example.org/{local}"))
}

pub fn triple(s: Term, p: Term, o: Term) -> Triple {
    Triple::new(s, p, o)
}
