use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::path::Dialect;
use crate::query::{answer_query, answers_via_closure, AnswerSet, Query, Var};
use crate::term::Prefixes;
use crate::rewrite::{rewrite_query, RewriteMode};

/// How a query is answered: plainly, or modulo RDFS by one of four
/// strategies that agree on genuine graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntailmentMode {
    Simple,
    /// Saturate the graph, then evaluate plainly.
    RdfsClosure,
    RdfsPsparql,
    RdfsNsparql,
    RdfsCpsparql,
}

impl EntailmentMode {
    pub const ALL: [EntailmentMode; 5] = [
        EntailmentMode::Simple,
        EntailmentMode::RdfsClosure,
        EntailmentMode::RdfsPsparql,
        EntailmentMode::RdfsNsparql,
        EntailmentMode::RdfsCpsparql,
    ];

    pub const RDFS: [EntailmentMode; 4] = [
        EntailmentMode::RdfsClosure,
        EntailmentMode::RdfsPsparql,
        EntailmentMode::RdfsNsparql,
        EntailmentMode::RdfsCpsparql,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntailmentMode::Simple => "simple",
            EntailmentMode::RdfsClosure => "rdfs-closure",
            EntailmentMode::RdfsPsparql => "rdfs-psparql",
            EntailmentMode::RdfsNsparql => "rdfs-nsparql",
            EntailmentMode::RdfsCpsparql => "rdfs-cpsparql",
        }
    }

    /// The rewriting used by the lazy strategies.
    pub fn rewrite_mode(self) -> Option<RewriteMode> {
        match self {
            EntailmentMode::RdfsPsparql => Some(RewriteMode::PsparqlTau),
            EntailmentMode::RdfsNsparql => Some(RewriteMode::NsparqlPhi),
            EntailmentMode::RdfsCpsparql => Some(RewriteMode::CpsparqlTau),
            _ => None,
        }
    }
}

impl fmt::Display for EntailmentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntailmentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EntailmentMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown semantics `{s}`")))
    }
}

/// Answers to `q` over `g` under `mode`. Simple evaluation accepts every
/// path dialect; `rdfs-nsparql` and `rdfs-cpsparql` accept their own path
/// language; the other RDFS modes take plain SPARQL only.
pub fn answer(q: &Query, g: &Graph, mode: EntailmentMode) -> Result<AnswerSet> {
    match (mode, mode.rewrite_mode()) {
        (EntailmentMode::Simple, _) => answer_query(q, g, Dialect::Mixed),
        (EntailmentMode::RdfsClosure, _) => answers_via_closure(q, g),
        (_, Some(rm)) => answer_query(&rewrite_query(q, rm)?, g, Dialect::Mixed),
        (_, None) => unreachable!("every lazy mode has a rewriting"),
    }
}

/// Answers as rows of rendered terms in `vars` order, `None` for null,
/// sorted lexicographically.
pub fn render_rows(answers: &AnswerSet, vars: &[Var], prefixes: &Prefixes) -> Vec<Vec<Option<String>>> {
    let mut rows: Vec<Vec<Option<String>>> = answers
        .iter()
        .map(|m| vars.iter().map(|v| m.value(v).map(|t| prefixes.render(t))).collect())
        .collect();
    rows.sort();
    rows
}
