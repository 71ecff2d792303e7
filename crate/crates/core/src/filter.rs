//! FILTER expressions: comparisons, `bound`, `regex` and boolean connectives.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use regex::{Regex, RegexBuilder};

use crate::error::Result;
use crate::lexer::Cursor;
use crate::query::map::{Map, Var};
use crate::term::{Prefixes, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Operands are terms; variables among them are looked up in the map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterExpr {
    True,
    Cmp(CmpOp, Term, Term),
    Bound(Var),
    /// Subject, pattern, flags (`i` for case-insensitive).
    Regex(Term, String, String),
    Not(Box<FilterExpr>),
    And(Box<FilterExpr>, Box<FilterExpr>),
    Or(Box<FilterExpr>, Box<FilterExpr>),
}

impl FilterExpr {
    pub fn cmp(op: CmpOp, a: Term, b: Term) -> Self {
        FilterExpr::Cmp(op, a, b)
    }

    pub fn and(a: FilterExpr, b: FilterExpr) -> Self {
        FilterExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FilterExpr, b: FilterExpr) -> Self {
        FilterExpr::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: FilterExpr) -> Self {
        FilterExpr::Not(Box::new(a))
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        let mut term = |t: &Term| {
            if let Term::Variable(v) = t {
                out.insert(v.clone());
            }
        };
        match self {
            FilterExpr::True => {}
            FilterExpr::Cmp(_, a, b) => {
                term(a);
                term(b);
            }
            FilterExpr::Bound(v) => {
                out.insert(v.clone());
            }
            FilterExpr::Regex(t, _, _) => term(t),
            FilterExpr::Not(e) => e.collect_vars(out),
            FilterExpr::And(a, b) | FilterExpr::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn render(&self, prefixes: &Prefixes) -> String {
        let mut out = String::new();
        self.write(prefixes, &mut out);
        out
    }

    fn prec(&self) -> u8 {
        match self {
            FilterExpr::Or(..) => 0,
            FilterExpr::And(..) => 1,
            FilterExpr::Cmp(..) => 2,
            _ => 3,
        }
    }

    fn write(&self, px: &Prefixes, out: &mut String) {
        let child = |e: &FilterExpr, min: u8, out: &mut String| {
            if e.prec() < min {
                out.push('(');
                e.write(px, out);
                out.push(')');
            } else {
                e.write(px, out);
            }
        };
        match self {
            FilterExpr::True => out.push_str("true"),
            FilterExpr::Cmp(op, a, b) => {
                out.push_str(&px.render(a));
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                out.push_str(&px.render(b));
            }
            FilterExpr::Bound(v) => out.push_str(&format!("bound(?{v})")),
            FilterExpr::Regex(t, pat, flags) => {
                out.push_str("regex(");
                out.push_str(&px.render(t));
                out.push_str(", ");
                out.push_str(&px.render(&Term::literal(pat)));
                if !flags.is_empty() {
                    out.push_str(", ");
                    out.push_str(&px.render(&Term::literal(flags)));
                }
                out.push(')');
            }
            FilterExpr::Not(e) => {
                out.push('!');
                child(e, 3, out);
            }
            FilterExpr::And(a, b) => {
                child(a, 1, out);
                out.push_str(" && ");
                child(b, 2, out);
            }
            FilterExpr::Or(a, b) => {
                child(a, 0, out);
                out.push_str(" || ");
                child(b, 1, out);
            }
        }
    }
}

impl fmt::Display for FilterExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Prefixes::default()))
    }
}

/// σ(K) = ⊤. Unbound variables and type errors make the result not ⊤.
pub fn eval_filter(sigma: &Map, k: &FilterExpr) -> bool {
    eval3(sigma, k) == Some(true)
}

/// Three-valued evaluation; `None` is an error.
fn eval3(sigma: &Map, k: &FilterExpr) -> Option<bool> {
    match k {
        FilterExpr::True => Some(true),
        FilterExpr::Bound(v) => Some(sigma.value(v).is_some()),
        FilterExpr::Cmp(op, a, b) => {
            let a = resolve(sigma, a)?;
            let b = resolve(sigma, b)?;
            compare(*op, a, b)
        }
        FilterExpr::Regex(t, pat, flags) => {
            let t = resolve(sigma, t)?;
            with_regex(pat, flags, |re| re.is_match(t.lexical()))
        }
        FilterExpr::Not(e) => eval3(sigma, e).map(|b| !b),
        FilterExpr::And(a, b) => match (eval3(sigma, a), eval3(sigma, b)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        FilterExpr::Or(a, b) => match (eval3(sigma, a), eval3(sigma, b)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
    }
}

fn resolve<'a>(sigma: &'a Map, t: &'a Term) -> Option<&'a Term> {
    match t {
        Term::Variable(v) => sigma.value(v),
        c => Some(c),
    }
}

fn compare(op: CmpOp, a: &Term, b: &Term) -> Option<bool> {
    let ord = match (a.as_number(), b.as_number()) {
        (Some(x), Some(y)) => x.partial_cmp(&y)?,
        _ => match op {
            CmpOp::Eq => return Some(a == b),
            CmpOp::Ne => return Some(a != b),
            _ => match (a, b) {
                (Term::Literal(x), Term::Literal(y)) | (Term::Iri(x), Term::Iri(y)) => x.cmp(y),
                _ => return None,
            },
        },
    };
    Some(match op {
        CmpOp::Eq => ord == Ordering::Equal,
        CmpOp::Ne => ord != Ordering::Equal,
        CmpOp::Lt => ord == Ordering::Less,
        CmpOp::Le => ord != Ordering::Greater,
        CmpOp::Gt => ord == Ordering::Greater,
        CmpOp::Ge => ord != Ordering::Less,
    })
}

thread_local! {
    static REGEX_CACHE: RefCell<HashMap<(String, String), Option<Regex>>> = RefCell::new(HashMap::new());
}

fn with_regex<T>(pat: &str, flags: &str, f: impl FnOnce(&Regex) -> T) -> Option<T> {
    REGEX_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        let re = cache
            .entry((pat.to_string(), flags.to_string()))
            .or_insert_with(|| {
                RegexBuilder::new(pat)
                    .case_insensitive(flags.contains('i'))
                    .build()
                    .ok()
            });
        re.as_ref().map(f)
    })
}

/// Parses `expr` as written between `FILTER(` and `)`.
pub(crate) fn parse_expr(cur: &mut Cursor) -> Result<FilterExpr> {
    let mut left = parse_and(cur)?;
    loop {
        cur.skip_ws();
        if cur.eat("||") {
            let right = parse_and(cur)?;
            left = FilterExpr::or(left, right);
        } else {
            return Ok(left);
        }
    }
}

fn parse_and(cur: &mut Cursor) -> Result<FilterExpr> {
    let mut left = parse_unary(cur)?;
    loop {
        cur.skip_ws();
        if cur.eat("&&") {
            let right = parse_unary(cur)?;
            left = FilterExpr::and(left, right);
        } else {
            return Ok(left);
        }
    }
}

fn parse_unary(cur: &mut Cursor) -> Result<FilterExpr> {
    cur.skip_ws();
    if cur.starts_with("!") && !cur.starts_with("!=") {
        cur.bump();
        return Ok(FilterExpr::not(parse_unary(cur)?));
    }
    if cur.eat("(") {
        let e = parse_expr(cur)?;
        cur.skip_ws();
        cur.expect(")")?;
        return Ok(e);
    }
    if cur.eat_keyword("bound") {
        cur.skip_ws();
        cur.expect("(")?;
        cur.skip_ws();
        let v = match cur.read_term()? {
            Term::Variable(v) => v,
            _ => return Err(cur.error("bound() takes a variable")),
        };
        cur.skip_ws();
        cur.expect(")")?;
        return Ok(FilterExpr::Bound(v));
    }
    if cur.eat_keyword("regex") {
        cur.skip_ws();
        cur.expect("(")?;
        cur.skip_ws();
        let t = cur.read_term()?;
        cur.skip_ws();
        cur.expect(",")?;
        cur.skip_ws();
        let pat = match cur.read_term()? {
            Term::Literal(p) => p.to_string(),
            _ => return Err(cur.error("regex pattern must be a quoted string")),
        };
        cur.skip_ws();
        let mut flags = String::new();
        if cur.eat(",") {
            cur.skip_ws();
            flags = match cur.read_term()? {
                Term::Literal(f) => f.to_string(),
                _ => return Err(cur.error("regex flags must be a quoted string")),
            };
            cur.skip_ws();
        }
        cur.expect(")")?;
        return Ok(FilterExpr::Regex(t, pat, flags));
    }
    if cur.eat_keyword("true") || cur.eat_keyword("TRUE") {
        return Ok(FilterExpr::True);
    }
    let a = cur.read_term()?;
    cur.skip_ws();
    let op = [
        ("<=", CmpOp::Le),
        (">=", CmpOp::Ge),
        ("!=", CmpOp::Ne),
        ("=", CmpOp::Eq),
        ("<", CmpOp::Lt),
        (">", CmpOp::Gt),
    ]
    .into_iter()
    .find(|(s, _)| cur.eat(s))
    .map(|(_, op)| op)
    .ok_or_else(|| cur.error("expected a comparison operator"))?;
    cur.skip_ws();
    let b = cur.read_term()?;
    Ok(FilterExpr::Cmp(op, a, b))
}

/// Parses a standalone filter expression.
pub fn parse_filter(text: &str) -> Result<FilterExpr> {
    let prefixes = Prefixes::default();
    let mut cur = Cursor::new(text, &prefixes, crate::lexer::BlankMode::Variable);
    let e = parse_expr(&mut cur)?;
    cur.skip_ws();
    if !cur.is_eof() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(pairs: &[(&str, Term)]) -> Map {
        Map::from_pairs(pairs.iter().cloned())
    }

    #[test]
    fn numeric_comparison() {
        let k = parse_filter("?s > 3").unwrap();
        assert!(eval_filter(&sigma(&[("s", Term::literal("4"))]), &k));
        assert!(!eval_filter(&sigma(&[("s", Term::literal("2"))]), &k));
        // type error: not a number, not comparable with a literal
        assert!(!eval_filter(&sigma(&[("s", Term::iri("four"))]), &k));
        assert!(!eval_filter(&Map::new(), &k));
        assert!(eval_filter(&sigma(&[("s", Term::literal("10"))]), &k));
    }

    #[test]
    fn bound_and_regex() {
        assert!(!eval_filter(&Map::new(), &parse_filter("bound(?x)").unwrap()));
        let k = parse_filter("regex(?x, \"^P\")").unwrap();
        assert!(eval_filter(&sigma(&[("x", Term::iri("Paris"))]), &k));
        assert!(!eval_filter(&sigma(&[("x", Term::iri("Amman"))]), &k));
    }

    #[test]
    fn error_semantics_of_connectives() {
        let m = sigma(&[("a", Term::literal("1"))]);
        assert!(eval_filter(&m, &parse_filter("?b = 1 || ?a = 1").unwrap()));
        assert!(!eval_filter(&m, &parse_filter("?b = 1 && ?a = 1").unwrap()));
        assert!(!eval_filter(&m, &parse_filter("!(?b = 1)").unwrap()));
        assert!(eval_filter(&m, &parse_filter("!(?a = 2)").unwrap()));
        assert!(eval_filter(&m, &parse_filter("?a != bus").unwrap()));
    }

    #[test]
    fn render_round_trips() {
        for src in ["?a = 1 || ?b < 2 && !bound(?c)", "(?a = 1 || ?b = 2) && ?c >= \"x\"", "regex(?x, \"a\\\"b\", \"i\")"] {
            let e = parse_filter(src).unwrap();
            assert_eq!(parse_filter(&e.to_string()).unwrap(), e, "{src}");
        }
    }
}
