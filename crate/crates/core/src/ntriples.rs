//! Line-oriented triple format: `subj pred obj .` with bare, prefixed or
//! bracketed IRIs, quoted literals, and `@prefix name: <iri> .` lines.

use std::fmt::Write as _;

use crate::error::Result;
use crate::graph::Graph;
use crate::lexer::{BlankMode, Cursor};
use crate::term::{Prefixes, Triple};

/// Parses triple text with the default prefix table.
pub fn parse_ntriples(text: &str) -> Result<Graph> {
    let mut prefixes = Prefixes::default();
    parse_ntriples_with(text, &mut prefixes)
}

/// Parses triple text, recording `@prefix` declarations in `prefixes`.
pub fn parse_ntriples_with(text: &str, prefixes: &mut Prefixes) -> Result<Graph> {
    Graph::from_triples(parse_triples(text, prefixes)?)
}

pub(crate) fn parse_triples(text: &str, prefixes: &mut Prefixes) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    let mut offset = 0;
    // The cursor borrows the prefix table, so it is rebuilt after each
    // declaration.
    while let Some((name, iri, next)) = parse_block(text, offset, prefixes, &mut out)? {
        prefixes.insert(&name, &iri);
        offset = next;
    }
    Ok(out)
}

/// Reads triples from `offset` until end of input (`None`) or until a prefix
/// declaration, returned together with the offset after it.
fn parse_block(
    text: &str,
    offset: usize,
    prefixes: &Prefixes,
    out: &mut Vec<Triple>,
) -> Result<Option<(String, String, usize)>> {
    let mut cur = Cursor::new(text, prefixes, BlankMode::Constant);
    cur.reset(offset);
    loop {
        cur.skip_ws();
        if cur.is_eof() {
            return Ok(None);
        }
        if cur.eat("@prefix") || cur.eat_keyword("PREFIX") {
            cur.skip_ws();
            let name = cur.read_bare();
            let Some(name) = name.strip_suffix(':') else {
                return Err(cur.error("expected `name:` after @prefix"));
            };
            cur.skip_ws();
            if cur.peek() != Some('<') {
                return Err(cur.error("expected <iri> in prefix declaration"));
            }
            let iri = cur.read_term()?;
            cur.skip_ws();
            cur.eat(".");
            return Ok(Some((name.to_string(), iri.lexical().to_string(), cur.pos())));
        }
        let s = cur.read_term()?;
        if s.is_literal() {
            return Err(cur.error("literal in subject position"));
        }
        cur.skip_ws();
        let p = cur.read_term()?;
        if !p.is_iri() {
            return Err(cur.error("predicate must be an IRI"));
        }
        cur.skip_ws();
        let o = cur.read_term()?;
        if o.is_variable() || s.is_variable() {
            return Err(cur.error("variables are not allowed in data"));
        }
        cur.skip_ws();
        cur.expect(".")?;
        out.push(Triple::new(s, p, o));
    }
}

/// Serializes a graph, one triple per line, compacting IRIs with `prefixes`.
/// Declarations for non-default prefixes are written first.
pub fn write_ntriples(g: &Graph, prefixes: &Prefixes) -> String {
    let defaults = Prefixes::default();
    let mut out = String::new();
    for (name, iri) in prefixes.entries() {
        if defaults.get(name) != Some(iri) {
            let _ = writeln!(out, "@prefix {name}: <{iri}> .");
        }
    }
    for t in g.triples() {
        let _ = writeln!(
            out,
            "{} {} {} .",
            prefixes.render(&t.s),
            prefixes.render(&t.p),
            prefixes.render(&t.o)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::term::Term;

    #[test]
    fn single_triple() {
        let g = parse_ntriples("dm:bcd rdf:type rn:gene .").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.voc().len(), 3);
    }

    #[test]
    fn empty_and_comments() {
        assert!(parse_ntriples("").unwrap().is_empty());
        assert!(parse_ntriples("# nothing\n\n  # more\n").unwrap().is_empty());
    }

    #[test]
    fn prefix_lines() {
        let mut p = Prefixes::default();
        let g = parse_ntriples_with("@prefix foaf: <http://xmlns.com/foaf/0.1/> .\nex:a foaf:name \"Faisal\" .", &mut p).unwrap();
        let t = g.triples().next().unwrap();
        assert_eq!(t.p, Term::iri("http://xmlns.com/foaf/0.1/name"));
        assert!(write_ntriples(&g, &p).contains("foaf:name"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_ntriples("a p b .\n\"lit\" p b .").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err:?}");
        let err = parse_ntriples("a \"p\" b .").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        assert!(parse_ntriples("a p b").is_err());
    }

    #[test]
    fn round_trip() {
        let text = "a p \"x y\" .\n_:b1 rdf:type <http://z/Q> .\nParis plane Amman .\n";
        let g = parse_ntriples(text).unwrap();
        let back = parse_ntriples(&write_ntriples(&g, &Prefixes::default())).unwrap();
        assert_eq!(g, back);
    }
}
