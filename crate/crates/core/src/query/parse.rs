use crate::error::Result;
use crate::filter::FilterExpr;
use crate::lexer::{BlankMode, Cursor};
use crate::path::{parse_filter_call, parse_triple_pattern, Dialect};
use crate::query::map::Var;
use crate::query::pattern::{GraphPattern, Query, Select};
use crate::term::{Prefixes, Term};

/// Parses `SELECT ?a ?b [FROM u] WHERE { … }` with the mixed path language.
pub fn parse_query(text: &str) -> Result<Query> {
    parse_query_with(text, Dialect::Mixed)
}

/// Parses a query and checks every triple pattern against `dialect`.
pub fn parse_query_with(text: &str, dialect: Dialect) -> Result<Query> {
    let (prefixes, body_start) = parse_prologue(text)?;
    let mut cur = Cursor::new(text, &prefixes, BlankMode::Variable);
    cur.reset(body_start);
    cur.skip_ws();
    if !keyword(&mut cur, "SELECT") {
        return Err(cur.error("expected SELECT"));
    }
    cur.skip_ws();
    let select = if cur.eat("*") {
        Select::All
    } else {
        let mut vars: Vec<Var> = Vec::new();
        while matches!(cur.peek(), Some('?' | '$')) {
            if let Term::Variable(v) = cur.read_term()? {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            cur.skip_ws();
        }
        // an empty list is a yes/no query; it still needs a body to follow
        if vars.is_empty() && cur.peek() != Some('{') {
            let save = cur.pos();
            let body = keyword(&mut cur, "WHERE") || keyword(&mut cur, "FROM");
            cur.reset(save);
            if !body {
                return Err(cur.error("expected `*` or selected variables"));
            }
        }
        Select::Vars(vars)
    };
    cur.skip_ws();
    let mut from = None;
    if keyword(&mut cur, "FROM") {
        cur.skip_ws();
        from = Some(cur.read_term()?);
        cur.skip_ws();
    }
    keyword(&mut cur, "WHERE");
    cur.skip_ws();
    let pattern = parse_group(&mut cur)?;
    cur.skip_ws();
    if !cur.is_eof() {
        return Err(cur.error("unexpected input after the WHERE clause"));
    }
    let q = Query {
        select,
        from,
        pattern,
        prefixes: prefixes.clone(),
    };
    q.validate()?;
    q.pattern.check_dialect(dialect)?;
    Ok(q)
}

fn keyword(cur: &mut Cursor, kw: &str) -> bool {
    cur.eat_keyword(kw) || cur.eat_keyword(&kw.to_lowercase())
}

/// `PREFIX p: <iri>` and `@prefix p: <iri> .` lines before SELECT.
fn parse_prologue(text: &str) -> Result<(Prefixes, usize)> {
    let mut prefixes = Prefixes::default();
    let mut pos = 0;
    loop {
        let scratch = Prefixes::default();
        let mut cur = Cursor::new(text, &scratch, BlankMode::Variable);
        cur.reset(pos);
        cur.skip_ws();
        let turtle = cur.eat("@prefix");
        if !turtle && !keyword(&mut cur, "PREFIX") {
            return Ok((prefixes, cur.pos()));
        }
        cur.skip_ws();
        let name_start = cur.pos();
        while cur.peek().is_some_and(|c| c != ':' && !c.is_whitespace()) {
            cur.bump();
        }
        let name = text[name_start..cur.pos()].to_string();
        cur.expect(":")?;
        cur.skip_ws();
        if cur.peek() != Some('<') {
            return Err(cur.error("expected `<iri>` in prefix declaration"));
        }
        let iri = cur.read_term()?;
        cur.skip_ws();
        if turtle {
            cur.expect(".")?;
        }
        prefixes.insert(&name, iri.lexical());
        pos = cur.pos();
    }
}

/// `{ elements }`.
pub(crate) fn parse_group(cur: &mut Cursor) -> Result<GraphPattern> {
    cur.expect("{")?;
    let mut pattern: Option<GraphPattern> = None;
    let mut filters: Vec<FilterExpr> = Vec::new();
    let join = |p: Option<GraphPattern>, g: GraphPattern| match p {
        None => g,
        Some(p) => GraphPattern::and(p, g),
    };
    loop {
        cur.skip_ws();
        match cur.peek() {
            None => return Err(cur.error("unterminated group")),
            Some('}') => {
                cur.bump();
                break;
            }
            Some('.') => {
                cur.bump();
            }
            Some('{') => {
                let mut g = parse_group(cur)?;
                loop {
                    cur.skip_ws();
                    if !keyword(cur, "UNION") {
                        break;
                    }
                    cur.skip_ws();
                    g = GraphPattern::union(g, parse_group(cur)?);
                }
                pattern = Some(join(pattern, g));
            }
            _ if keyword(cur, "OPTIONAL") => {
                cur.skip_ws();
                let g = parse_group(cur)?;
                pattern = Some(GraphPattern::opt(pattern.unwrap_or(GraphPattern::Bgp(Vec::new())), g));
            }
            _ if keyword(cur, "FILTER") => filters.push(parse_filter_call(cur)?),
            _ => {
                let mut triples = vec![parse_triple_pattern(cur)?];
                loop {
                    cur.skip_ws();
                    if !cur.eat(".") {
                        break;
                    }
                    cur.skip_ws();
                    if at_element_boundary(cur) {
                        break;
                    }
                    triples.push(parse_triple_pattern(cur)?);
                }
                cur.skip_ws();
                if !at_element_boundary(cur) {
                    return Err(cur.error("expected `.` between triple patterns"));
                }
                pattern = Some(join(pattern, GraphPattern::Bgp(triples)));
            }
        }
    }
    let pattern = pattern.unwrap_or(GraphPattern::Bgp(Vec::new()));
    Ok(match filters.into_iter().reduce(FilterExpr::and) {
        Some(k) => GraphPattern::filter(pattern, k),
        None => pattern,
    })
}

fn at_element_boundary(cur: &mut Cursor) -> bool {
    if matches!(cur.peek(), None | Some('{' | '}' | '.')) {
        return true;
    }
    let save = cur.pos();
    let hit = keyword(cur, "OPTIONAL") || keyword(cur, "FILTER");
    cur.reset(save);
    hit
}
