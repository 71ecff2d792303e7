use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::filter::{CmpOp, FilterExpr};
use crate::graph::{Axis, AxisKind};
use crate::query::map::Var;
use crate::query::pattern::{Predicate, TriplePattern};
use crate::term::{Prefixes, Term};

/// One AST for the three path languages. Which variants are legal depends on
/// the [`Dialect`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathExpr {
    /// `axis`: any label.
    Axis(Axis),
    /// `axis::a`.
    Test(Axis, Term),
    /// `axis::[nre]`: the label must start an `nre` path.
    Nested(Axis, Box<PathExpr>),
    /// `axis::[?x: ψ]` or `axis::]?x: ψ[`.
    Constrained(Axis, Box<Constraint>),
    /// A bare IRI, same as `next::a`.
    Atom(Term),
    /// `!a`: a `next` step whose label is not `a`.
    NegAtom(Term),
    /// `?x` inside a path: a `next` step whose label is bound to `?x`.
    VarAtom(Var),
    Epsilon,
    Seq(Box<PathExpr>, Box<PathExpr>),
    Alt(Box<PathExpr>, Box<PathExpr>),
    Star(Box<PathExpr>),
    Plus(Box<PathExpr>),
}

/// A constraint `?head: { body } FILTER(filter)` on the label of a step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub head: Var,
    /// Open brackets `]?x: …[` export the head to the answer maps.
    pub exported: bool,
    pub body: Vec<TriplePattern>,
    pub filter: Option<FilterExpr>,
}

/// The path languages, from the most to the least restrictive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// Plain triple patterns only.
    Sparql,
    /// Regular expressions over IRIs and variables.
    Psparql,
    /// Nested regular expressions over axes.
    Nsparql,
    /// Constrained expressions in the one-variable fragment.
    Cpsparql,
    /// Constrained expressions with arbitrary constraint bodies.
    CpsparqlFull,
    /// Anything goes.
    Mixed,
}

impl Dialect {
    pub fn name(self) -> &'static str {
        match self {
            Dialect::Sparql => "sparql",
            Dialect::Psparql => "psparql",
            Dialect::Nsparql => "nsparql",
            Dialect::Cpsparql => "cpsparql",
            Dialect::CpsparqlFull => "cpsparql-full",
            Dialect::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl PathExpr {
    pub fn seq(a: PathExpr, b: PathExpr) -> Self {
        PathExpr::Seq(Box::new(a), Box::new(b))
    }

    pub fn alt(a: PathExpr, b: PathExpr) -> Self {
        PathExpr::Alt(Box::new(a), Box::new(b))
    }

    pub fn star(e: PathExpr) -> Self {
        PathExpr::Star(Box::new(e))
    }

    pub fn plus(e: PathExpr) -> Self {
        PathExpr::Plus(Box::new(e))
    }

    pub fn next(label: Term) -> Self {
        PathExpr::Test(Axis::NEXT, label)
    }

    pub fn nested(axis: Axis, e: PathExpr) -> Self {
        PathExpr::Nested(axis, Box::new(e))
    }

    pub fn constrained(axis: Axis, c: Constraint) -> Self {
        PathExpr::Constrained(axis, Box::new(c))
    }

    /// Left-nested sequence of the parts; `eps` when empty.
    pub fn seq_all<I: IntoIterator<Item = PathExpr>>(parts: I) -> Self {
        parts.into_iter().reduce(PathExpr::seq).unwrap_or(PathExpr::Epsilon)
    }

    /// Left-nested alternative of the parts; `None` when empty.
    pub fn alt_all<I: IntoIterator<Item = PathExpr>>(parts: I) -> Option<Self> {
        parts.into_iter().reduce(PathExpr::alt)
    }

    /// T(R): the leaf symbols. Epsilon contributes nothing.
    pub fn terms_of(&self) -> BTreeSet<PathExpr> {
        let mut out = BTreeSet::new();
        self.walk_leaves(&mut |leaf| {
            out.insert(leaf.clone());
        });
        out
    }

    pub(crate) fn walk_leaves(&self, f: &mut dyn FnMut(&PathExpr)) {
        match self {
            PathExpr::Seq(a, b) | PathExpr::Alt(a, b) => {
                a.walk_leaves(f);
                b.walk_leaves(f);
            }
            PathExpr::Star(e) | PathExpr::Plus(e) => e.walk_leaves(f),
            PathExpr::Epsilon => {}
            leaf => f(leaf),
        }
    }

    /// ℬ(R): heads of open constraints, plus variables used as atoms.
    /// Constraint bodies are scopes of their own and are not searched.
    pub fn exported_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.walk_leaves(&mut |leaf| match leaf {
            PathExpr::VarAtom(v) => {
                out.insert(v.clone());
            }
            PathExpr::Constrained(_, c) if c.exported => {
                out.insert(c.head.clone());
            }
            _ => {}
        });
        out
    }

    /// True if the expression has no exported variables.
    pub fn is_closed(&self) -> bool {
        self.exported_vars().is_empty()
    }

    /// Whether every constraint belongs to the one-variable fragment.
    pub fn is_cpsparql(&self) -> bool {
        let mut ok = true;
        self.walk_leaves(&mut |leaf| {
            if let PathExpr::Constrained(_, c) = leaf {
                ok &= c.is_cpsparql();
            }
        });
        ok
    }

    /// Checks that every construct is legal in `dialect`.
    pub fn check_dialect(&self, dialect: Dialect) -> Result<()> {
        if dialect == Dialect::Sparql {
            return Err(Error::Dialect(format!("path expression `{self}` is not allowed in plain SPARQL")));
        }
        let mut err = None;
        self.walk_leaves(&mut |leaf| {
            if err.is_none() {
                err = leaf_violation(leaf, dialect);
            }
        });
        match err {
            Some(msg) => Err(Error::Dialect(msg)),
            None => Ok(()),
        }
    }

    /// The expression matching exactly the reversed paths.
    pub fn inverse(&self) -> PathExpr {
        match self {
            PathExpr::Axis(a) => PathExpr::Axis(a.inverse()),
            PathExpr::Test(a, l) => PathExpr::Test(a.inverse(), l.clone()),
            PathExpr::Nested(a, e) => PathExpr::Nested(a.inverse(), e.clone()),
            PathExpr::Constrained(a, c) => PathExpr::Constrained(a.inverse(), c.clone()),
            PathExpr::Atom(l) => PathExpr::Test(Axis::NEXT_INV, l.clone()),
            // no inverted atom syntax: go through constraints on next^-1
            PathExpr::NegAtom(a) => PathExpr::constrained(
                Axis::NEXT_INV,
                Constraint {
                    head: Var::from("neg"),
                    exported: false,
                    body: Vec::new(),
                    filter: Some(FilterExpr::cmp(CmpOp::Ne, Term::var("neg"), a.clone())),
                },
            ),
            PathExpr::VarAtom(v) => PathExpr::constrained(Axis::NEXT_INV, Constraint::open_true(v)),
            PathExpr::Epsilon => PathExpr::Epsilon,
            PathExpr::Seq(a, b) => PathExpr::seq(b.inverse(), a.inverse()),
            PathExpr::Alt(a, b) => PathExpr::alt(a.inverse(), b.inverse()),
            PathExpr::Star(e) => PathExpr::star(e.inverse()),
            PathExpr::Plus(e) => PathExpr::plus(e.inverse()),
        }
    }

    /// Replaces leaves bottom-up with `f`; `f` returns `None` to keep a leaf.
    pub fn map_leaves(&self, f: &mut dyn FnMut(&PathExpr) -> Option<PathExpr>) -> PathExpr {
        match self {
            PathExpr::Seq(a, b) => PathExpr::seq(a.map_leaves(f), b.map_leaves(f)),
            PathExpr::Alt(a, b) => PathExpr::alt(a.map_leaves(f), b.map_leaves(f)),
            PathExpr::Star(e) => PathExpr::star(e.map_leaves(f)),
            PathExpr::Plus(e) => PathExpr::plus(e.map_leaves(f)),
            PathExpr::Epsilon => PathExpr::Epsilon,
            leaf => f(leaf).unwrap_or_else(|| leaf.clone()),
        }
    }

    /// Binds exported variables: `?x` atoms become `next::t`, and an open
    /// constraint with head `?x` becomes closed with the extra test `?x = t`.
    pub fn substitute(&self, var: &str, value: &Term) -> PathExpr {
        self.map_leaves(&mut |leaf| match leaf {
            PathExpr::VarAtom(v) if &**v == var => Some(PathExpr::next(value.clone())),
            PathExpr::Constrained(axis, c) if c.exported && &*c.head == var => {
                let eq = FilterExpr::cmp(
                    CmpOp::Eq,
                    Term::Variable(c.head.clone()),
                    value.clone(),
                );
                let filter = match &c.filter {
                    Some(f) => FilterExpr::and(f.clone(), eq),
                    None => eq,
                };
                Some(PathExpr::constrained(
                    *axis,
                    Constraint {
                        exported: false,
                        filter: Some(filter),
                        ..(**c).clone()
                    },
                ))
            }
            _ => None,
        })
    }

    /// Surface syntax, compacting IRIs with `prefixes`.
    pub fn render(&self, prefixes: &Prefixes) -> String {
        let mut out = String::new();
        self.write(prefixes, 0, &mut out);
        out
    }

    fn prec(&self) -> u8 {
        match self {
            PathExpr::Alt(..) => 0,
            PathExpr::Seq(..) => 1,
            PathExpr::Star(_) | PathExpr::Plus(_) => 2,
            _ => 3,
        }
    }

    fn write(&self, px: &Prefixes, min: u8, out: &mut String) {
        if self.prec() < min {
            out.push('(');
            self.write(px, 0, out);
            out.push(')');
            return;
        }
        match self {
            PathExpr::Axis(a) => out.push_str(&a.to_string()),
            PathExpr::Test(a, l) => {
                out.push_str(&a.to_string());
                out.push_str("::");
                out.push_str(&px.render(l));
            }
            PathExpr::Nested(a, e) => {
                out.push_str(&a.to_string());
                out.push_str("::[");
                e.write(px, 0, out);
                out.push(']');
            }
            PathExpr::Constrained(a, c) => {
                out.push_str(&a.to_string());
                out.push_str("::");
                c.write(px, out);
            }
            PathExpr::Atom(t) => out.push_str(&px.render(t)),
            PathExpr::NegAtom(t) => {
                out.push('!');
                out.push_str(&px.render(t));
            }
            PathExpr::VarAtom(v) => {
                out.push('?');
                out.push_str(v);
            }
            PathExpr::Epsilon => out.push_str("eps"),
            PathExpr::Seq(a, b) => {
                a.write(px, 1, out);
                out.push('/');
                b.write(px, 2, out);
            }
            PathExpr::Alt(a, b) => {
                a.write(px, 0, out);
                out.push('|');
                b.write(px, 1, out);
            }
            PathExpr::Star(e) | PathExpr::Plus(e) => {
                // axis forms read better parenthesized: (next::sc)+
                let wrap = matches!(
                    **e,
                    PathExpr::Axis(_) | PathExpr::Test(..) | PathExpr::Nested(..) | PathExpr::Constrained(..)
                );
                if wrap {
                    out.push('(');
                    e.write(px, 0, out);
                    out.push(')');
                } else {
                    e.write(px, 2, out);
                }
                out.push(if matches!(self, PathExpr::Star(_)) { '*' } else { '+' });
            }
        }
    }
}

fn leaf_violation(leaf: &PathExpr, dialect: Dialect) -> Option<String> {
    let what = match leaf {
        PathExpr::Axis(_) | PathExpr::Test(..) => "axis step",
        PathExpr::Nested(..) => "nested expression",
        PathExpr::Constrained(..) => "constrained step",
        PathExpr::Atom(_) => "IRI atom",
        PathExpr::NegAtom(_) => "negated atom",
        PathExpr::VarAtom(_) => "variable atom",
        _ => return None,
    };
    let allowed = match dialect {
        Dialect::Sparql => false,
        Dialect::Psparql => matches!(leaf, PathExpr::Atom(_) | PathExpr::NegAtom(_) | PathExpr::VarAtom(_)),
        Dialect::Nsparql => matches!(leaf, PathExpr::Axis(_) | PathExpr::Test(..) | PathExpr::Nested(..)),
        Dialect::Cpsparql | Dialect::CpsparqlFull => {
            matches!(leaf, PathExpr::Axis(_) | PathExpr::Test(..) | PathExpr::Constrained(..))
        }
        Dialect::Mixed => true,
    };
    if !allowed {
        let shown = leaf.to_string();
        return Some(match leaf {
            PathExpr::VarAtom(v) if dialect == Dialect::Nsparql => {
                format!("variable ?{v} is not allowed in nested regular expressions")
            }
            _ => format!("{what} `{shown}` is not allowed in {dialect} paths"),
        });
    }
    match leaf {
        PathExpr::Nested(_, e) => e.check_dialect(dialect).err().map(|e| e.to_string()),
        PathExpr::Constrained(_, c) => {
            if dialect == Dialect::Cpsparql && !c.is_cpsparql() {
                return Some(format!(
                    "constraint on ?{} is outside the one-variable fragment (at most one body triple ⟨?{}, path, v⟩ and a filter over ?{} and v)",
                    c.head, c.head, c.head
                ));
            }
            let inner = if dialect == Dialect::Cpsparql { Dialect::Cpsparql } else { dialect };
            for t in &c.body {
                if let Predicate::Path(p) = &t.p {
                    if let Err(e) = p.check_dialect(inner) {
                        return Some(e.to_string());
                    }
                }
            }
            None
        }
        _ => None,
    }
}

impl Constraint {
    /// `]?x: TRUE[`.
    pub fn open_true(head: impl AsRef<str>) -> Self {
        Constraint {
            head: Var::from(head.as_ref()),
            exported: true,
            body: Vec::new(),
            filter: None,
        }
    }

    /// `[?x: { ?x path object }]`.
    pub fn closed_single(head: impl AsRef<str>, path: PathExpr, object: Term) -> Self {
        let head = Var::from(head.as_ref());
        Constraint {
            body: vec![TriplePattern::path(Term::Variable(head.clone()), path, object)],
            head,
            exported: false,
            filter: None,
        }
    }

    pub fn head_term(&self) -> Term {
        Term::Variable(self.head.clone())
    }

    /// Membership in the one-variable fragment.
    pub fn is_cpsparql(&self) -> bool {
        let filter_vars = self.filter.as_ref().map(FilterExpr::variables).unwrap_or_default();
        let trivial_filter = matches!(self.filter, None | Some(FilterExpr::True));
        if self.exported {
            return self.body.is_empty() && trivial_filter;
        }
        match self.body.as_slice() {
            [t] => {
                let subject_ok = t.s == self.head_term();
                let path_ok = match &t.p {
                    Predicate::Path(p) => p.is_closed() && p.is_cpsparql(),
                    Predicate::Term(p) => p.is_iri(),
                };
                let object_ok = t.o != self.head_term();
                let allowed: Vec<&str> = match &t.o {
                    Term::Variable(v) => vec![&*self.head, &**v],
                    _ => vec![&*self.head],
                };
                subject_ok && path_ok && object_ok && filter_vars.iter().all(|v| allowed.contains(&&**v))
            }
            _ => false,
        }
    }

    fn write(&self, px: &Prefixes, out: &mut String) {
        out.push(if self.exported { ']' } else { '[' });
        out.push('?');
        out.push_str(&self.head);
        out.push_str(": ");
        let mut parts = Vec::new();
        if !self.body.is_empty() {
            let triples: Vec<String> = self.body.iter().map(|t| t.render(px)).collect();
            parts.push(format!("{{ {} }}", triples.join(" . ")));
        }
        match &self.filter {
            Some(FilterExpr::True) | None => {}
            Some(f) => parts.push(format!("FILTER({})", f.render(px))),
        }
        if parts.is_empty() {
            parts.push("TRUE".into());
        }
        out.push_str(&parts.join(" "));
        out.push(if self.exported { '[' } else { ']' });
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Prefixes::default()))
    }
}

/// nSPARQL to cpSPARQL: nested steps become one-variable constraints.
pub fn trans(e: &PathExpr) -> PathExpr {
    match e {
        PathExpr::Seq(a, b) => PathExpr::seq(trans(a), trans(b)),
        PathExpr::Alt(a, b) => PathExpr::alt(trans(a), trans(b)),
        PathExpr::Star(a) => PathExpr::star(trans(a)),
        PathExpr::Plus(a) => PathExpr::plus(trans(a)),
        PathExpr::Nested(axis, inner) => {
            let c = match &**inner {
                PathExpr::Seq(exp3, last) => match &**last {
                    PathExpr::Test(a, p) if a.kind == AxisKind::SelfAxis => {
                        Constraint::closed_single("x", trans(exp3), p.clone())
                    }
                    _ => Constraint::closed_single("x", trans(inner), Term::var("y")),
                },
                _ => Constraint::closed_single("x", trans(inner), Term::var("y")),
            };
            PathExpr::constrained(*axis, c)
        }
        leaf => leaf.clone(),
    }
}
