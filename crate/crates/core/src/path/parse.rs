use crate::error::Result;
use crate::filter::{parse_expr, FilterExpr};
use crate::graph::{Axis, AxisKind};
use crate::lexer::{BlankMode, Cursor};
use crate::path::ast::{Constraint, Dialect, PathExpr};
use crate::query::map::Var;
use crate::query::pattern::{Predicate, TriplePattern};
use crate::term::{Prefixes, Term};

/// Parses a path expression and checks it against `dialect`.
pub fn parse_path(text: &str, dialect: Dialect) -> Result<PathExpr> {
    parse_path_with(text, dialect, &Prefixes::default())
}

pub fn parse_path_with(text: &str, dialect: Dialect, prefixes: &Prefixes) -> Result<PathExpr> {
    let mut cur = Cursor::new(text, prefixes, BlankMode::Variable);
    let e = parse_alt(&mut cur)?;
    cur.skip_ws();
    if !cur.is_eof() {
        return Err(cur.error("unexpected trailing input after path"));
    }
    e.check_dialect(dialect)?;
    Ok(e)
}

pub(crate) fn parse_alt(cur: &mut Cursor) -> Result<PathExpr> {
    let mut left = parse_seq(cur)?;
    loop {
        let save = cur.pos();
        cur.skip_ws();
        if cur.eat("|") {
            left = PathExpr::alt(left, parse_seq(cur)?);
        } else {
            cur.reset(save);
            return Ok(left);
        }
    }
}

fn parse_seq(cur: &mut Cursor) -> Result<PathExpr> {
    let mut left = parse_postfix(cur)?;
    loop {
        let save = cur.pos();
        cur.skip_ws();
        if cur.eat("/") {
            left = PathExpr::seq(left, parse_postfix(cur)?);
        } else {
            cur.reset(save);
            return Ok(left);
        }
    }
}

fn parse_postfix(cur: &mut Cursor) -> Result<PathExpr> {
    let mut e = parse_primary(cur)?;
    loop {
        if cur.eat("*") {
            e = PathExpr::star(e);
        } else if cur.eat("+") {
            e = PathExpr::plus(e);
        } else {
            return Ok(e);
        }
    }
}

fn axis_kind(word: &str) -> Option<AxisKind> {
    Some(match word {
        "self" => AxisKind::SelfAxis,
        "next" => AxisKind::Next,
        "edge" => AxisKind::Edge,
        "node" => AxisKind::Node,
        _ => return None,
    })
}

fn parse_primary(cur: &mut Cursor) -> Result<PathExpr> {
    cur.skip_ws();
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let e = parse_alt(cur)?;
            cur.skip_ws();
            cur.expect(")")?;
            Ok(e)
        }
        Some('!') => {
            cur.bump();
            match cur.read_term()? {
                t @ Term::Iri(_) => Ok(PathExpr::NegAtom(t)),
                _ => Err(cur.error("`!` must be followed by an IRI")),
            }
        }
        Some('?' | '$') => match cur.read_term()? {
            Term::Variable(v) => Ok(PathExpr::VarAtom(v)),
            _ => unreachable!("`?` always starts a variable"),
        },
        Some('^') => {
            cur.bump();
            let start = cur.pos();
            let word = cur.read_bare();
            match axis_kind(word) {
                Some(kind) => parse_axis_suffix(cur, Axis::new(kind, true)),
                None => {
                    cur.reset(start);
                    Err(cur.error("`^` must be followed by an axis"))
                }
            }
        }
        Some('<') => Ok(PathExpr::Atom(cur.read_term()?)),
        Some(c) if crate::lexer::is_name_char(c) => {
            let start = cur.pos();
            let word = cur.read_bare();
            if word == "eps" {
                return Ok(PathExpr::Epsilon);
            }
            if let Some(kind) = axis_kind(word) {
                let inverted = cur.eat("^-1");
                return parse_axis_suffix(cur, Axis::new(kind, inverted));
            }
            if let Some(kind) = word.strip_suffix("-1").and_then(axis_kind) {
                return parse_axis_suffix(cur, Axis::new(kind, true));
            }
            cur.reset(start);
            match cur.read_term()? {
                t @ Term::Iri(_) => Ok(PathExpr::Atom(t)),
                _ => {
                    cur.reset(start);
                    Err(cur.error("literals cannot label a path step"))
                }
            }
        }
        _ => Err(cur.error("expected a path expression")),
    }
}

fn parse_axis_suffix(cur: &mut Cursor, axis: Axis) -> Result<PathExpr> {
    if cur.eat("::") {
        return match cur.peek() {
            Some('[') => parse_bracket(cur, axis),
            Some(']') => {
                cur.bump();
                let c = parse_constraint(cur, true)?;
                cur.skip_ws();
                cur.expect("[")?;
                Ok(PathExpr::constrained(axis, c))
            }
            _ => {
                let start = cur.pos();
                match cur.read_term()? {
                    Term::Variable(_) => {
                        cur.reset(start);
                        Err(cur.error("axis labels must be constants; use `axis::]?x: TRUE[` to bind a label"))
                    }
                    label => Ok(PathExpr::Test(axis, label)),
                }
            }
        };
    }
    if cur.peek() == Some('[') {
        return parse_bracket(cur, axis);
    }
    Ok(PathExpr::Axis(axis))
}

/// `[nre]` or `[?x: ψ]`, starting at the `[`.
fn parse_bracket(cur: &mut Cursor, axis: Axis) -> Result<PathExpr> {
    cur.expect("[")?;
    cur.skip_ws();
    if is_constraint_head(cur) {
        let c = parse_constraint(cur, false)?;
        cur.skip_ws();
        cur.expect("]")?;
        return Ok(PathExpr::constrained(axis, c));
    }
    let e = parse_alt(cur)?;
    cur.skip_ws();
    cur.expect("]")?;
    Ok(PathExpr::nested(axis, e))
}

// `?x :` but not `?x ::`
fn is_constraint_head(cur: &mut Cursor) -> bool {
    let start = cur.pos();
    let ok = matches!(cur.peek(), Some('?' | '$')) && {
        cur.bump();
        cur.read_var_name().is_ok() && {
            cur.skip_ws();
            cur.starts_with(":") && !cur.starts_with("::")
        }
    };
    cur.reset(start);
    ok
}

/// `?x: TRUE`, `?x: { triples } FILTER(expr)`, or `?x: FILTER(expr)`.
fn parse_constraint(cur: &mut Cursor, exported: bool) -> Result<Constraint> {
    cur.skip_ws();
    let head: Var = match cur.read_term()? {
        Term::Variable(v) => v,
        _ => return Err(cur.error("a constraint starts with its head variable")),
    };
    cur.skip_ws();
    cur.expect(":")?;
    cur.skip_ws();
    let mut body = Vec::new();
    let mut filters: Vec<FilterExpr> = Vec::new();
    if cur.eat_keyword("TRUE") {
        return Ok(Constraint {
            head,
            exported,
            body,
            filter: None,
        });
    }
    let mut any = false;
    if cur.eat("{") {
        any = true;
        loop {
            cur.skip_ws();
            if cur.eat("}") {
                break;
            }
            if cur.eat_keyword("FILTER") {
                filters.push(parse_filter_call(cur)?);
            } else {
                body.push(parse_triple_pattern(cur)?);
            }
            cur.skip_ws();
            cur.eat(".");
        }
        cur.skip_ws();
    }
    if cur.eat_keyword("FILTER") {
        any = true;
        filters.push(parse_filter_call(cur)?);
    }
    if !any {
        return Err(cur.error("expected `TRUE`, `{` or `FILTER` in constraint"));
    }
    Ok(Constraint {
        head,
        exported,
        body,
        filter: filters.into_iter().reduce(FilterExpr::and),
    })
}

/// `(expr)` after the FILTER keyword.
pub(crate) fn parse_filter_call(cur: &mut Cursor) -> Result<FilterExpr> {
    cur.skip_ws();
    cur.expect("(")?;
    let k = parse_expr(cur)?;
    cur.skip_ws();
    cur.expect(")")?;
    Ok(k)
}

/// `subject path-or-term object`.
pub(crate) fn parse_triple_pattern(cur: &mut Cursor) -> Result<TriplePattern> {
    cur.skip_ws();
    let start = cur.pos();
    let s = cur.read_term()?;
    cur.skip_ws();
    let p = match parse_alt(cur)? {
        PathExpr::Atom(t) => Predicate::Term(t),
        PathExpr::VarAtom(v) => Predicate::Term(Term::Variable(v)),
        e => Predicate::Path(e),
    };
    cur.skip_ws();
    let o = cur.read_term()?;
    if s.is_literal() && matches!(p, Predicate::Term(_)) {
        cur.reset(start);
        return Err(cur.error("a literal cannot be the subject of a triple pattern"));
    }
    Ok(TriplePattern { s, p, o })
}
