use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::filter::FilterExpr;
use crate::graph::Graph;
use crate::homomorphism::BasicGraphPattern;
use crate::path::{Dialect, PathExpr};
use crate::query::map::Var;
use crate::term::{Prefixes, Term, Triple};

/// Predicate position of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    /// An IRI or a variable.
    Term(Term),
    Path(PathExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    pub s: Term,
    pub p: Predicate,
    pub o: Term,
}

impl TriplePattern {
    pub fn plain(s: Term, p: Term, o: Term) -> Self {
        TriplePattern {
            s,
            p: Predicate::Term(p),
            o,
        }
    }

    pub fn path(s: Term, p: PathExpr, o: Term) -> Self {
        TriplePattern {
            s,
            p: Predicate::Path(p),
            o,
        }
    }

    /// Variables that an answer to this triple binds.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out: BTreeSet<Var> = [&self.s, &self.o]
            .into_iter()
            .filter_map(var_of)
            .collect();
        match &self.p {
            Predicate::Term(p) => out.extend(var_of(p)),
            Predicate::Path(e) => out.extend(e.exported_vars()),
        }
        out
    }

    /// The plain triple, if the predicate is not a path.
    pub fn as_triple(&self) -> Option<Triple> {
        match &self.p {
            Predicate::Term(p) => Some(Triple::new(self.s.clone(), p.clone(), self.o.clone())),
            Predicate::Path(_) => None,
        }
    }

    pub fn check_dialect(&self, dialect: Dialect) -> Result<()> {
        match &self.p {
            Predicate::Term(Term::Variable(v)) if dialect == Dialect::Nsparql => Err(Error::Dialect(format!(
                "variable predicate ?{v} cannot be expressed with nested regular expressions"
            ))),
            Predicate::Term(Term::Literal(l)) => {
                Err(Error::InvalidQuery(format!("literal \"{l}\" in predicate position")))
            }
            Predicate::Term(_) => Ok(()),
            Predicate::Path(e) => e.check_dialect(dialect),
        }
    }

    pub fn render(&self, px: &Prefixes) -> String {
        let p = match &self.p {
            Predicate::Term(t) => px.render(t),
            Predicate::Path(e) => e.render(px),
        };
        format!("{} {} {}", px.render(&self.s), p, px.render(&self.o))
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Prefixes::default()))
    }
}

fn var_of(t: &Term) -> Option<Var> {
    match t {
        Term::Variable(v) => Some(v.clone()),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphPattern {
    Bgp(Vec<TriplePattern>),
    And(Box<GraphPattern>, Box<GraphPattern>),
    Union(Box<GraphPattern>, Box<GraphPattern>),
    Opt(Box<GraphPattern>, Box<GraphPattern>),
    Filter(Box<GraphPattern>, FilterExpr),
}

impl GraphPattern {
    pub fn bgp(triples: Vec<TriplePattern>) -> Self {
        GraphPattern::Bgp(triples)
    }

    pub fn and(a: GraphPattern, b: GraphPattern) -> Self {
        GraphPattern::And(Box::new(a), Box::new(b))
    }

    pub fn union(a: GraphPattern, b: GraphPattern) -> Self {
        GraphPattern::Union(Box::new(a), Box::new(b))
    }

    pub fn opt(a: GraphPattern, b: GraphPattern) -> Self {
        GraphPattern::Opt(Box::new(a), Box::new(b))
    }

    pub fn filter(p: GraphPattern, k: FilterExpr) -> Self {
        GraphPattern::Filter(Box::new(p), k)
    }

    /// ℬ(P): variables that answers may bind, including exported path variables.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.for_each_triple(&mut |t| out.extend(t.variables()));
        out
    }

    /// Every variable written in the pattern, constraint-local ones included.
    pub fn mentioned_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut collect = |s: &str| {
            out.insert(s.to_string());
        };
        self.walk(&mut |p| {
            if let GraphPattern::Filter(_, k) = p {
                k.variables().iter().for_each(|v| collect(v));
            }
        });
        self.for_each_triple(&mut |t| mention_triple(t, &mut collect));
        out
    }

    fn walk(&self, f: &mut dyn FnMut(&GraphPattern)) {
        f(self);
        match self {
            GraphPattern::Bgp(_) => {}
            GraphPattern::And(a, b) | GraphPattern::Union(a, b) | GraphPattern::Opt(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            GraphPattern::Filter(p, _) => p.walk(f),
        }
    }

    pub fn for_each_triple(&self, f: &mut dyn FnMut(&TriplePattern)) {
        self.walk(&mut |p| {
            if let GraphPattern::Bgp(ts) = p {
                ts.iter().for_each(&mut *f);
            }
        });
    }

    /// The triples of all BGPs, as the closure context H.
    pub fn context(&self) -> BasicGraphPattern {
        let mut triples = Vec::new();
        self.for_each_triple(&mut |t| triples.extend(t.as_triple()));
        BasicGraphPattern::new(triples)
    }

    pub fn check_dialect(&self, dialect: Dialect) -> Result<()> {
        let mut res = Ok(());
        self.for_each_triple(&mut |t| {
            if res.is_ok() {
                res = t.check_dialect(dialect);
            }
        });
        res
    }

    /// Rebuilds the pattern with every BGP replaced by `f(bgp)`.
    pub fn try_map_bgps(&self, f: &mut dyn FnMut(&[TriplePattern]) -> Result<GraphPattern>) -> Result<GraphPattern> {
        Ok(match self {
            GraphPattern::Bgp(ts) => f(ts)?,
            GraphPattern::And(a, b) => GraphPattern::and(a.try_map_bgps(f)?, b.try_map_bgps(f)?),
            GraphPattern::Union(a, b) => GraphPattern::union(a.try_map_bgps(f)?, b.try_map_bgps(f)?),
            GraphPattern::Opt(a, b) => GraphPattern::opt(a.try_map_bgps(f)?, b.try_map_bgps(f)?),
            GraphPattern::Filter(p, k) => GraphPattern::filter(p.try_map_bgps(f)?, k.clone()),
        })
    }

    /// Operator skeleton with BGPs collapsed, e.g. `Opt(Bgp,Filter(Bgp))`.
    pub fn shape(&self) -> String {
        match self {
            GraphPattern::Bgp(_) => "Bgp".into(),
            GraphPattern::And(a, b) => format!("And({},{})", a.shape(), b.shape()),
            GraphPattern::Union(a, b) => format!("Union({},{})", a.shape(), b.shape()),
            GraphPattern::Opt(a, b) => format!("Opt({},{})", a.shape(), b.shape()),
            GraphPattern::Filter(p, _) => format!("Filter({})", p.shape()),
        }
    }

    /// Group syntax without the outer braces.
    pub fn render(&self, px: &Prefixes) -> String {
        match self {
            GraphPattern::Bgp(ts) => ts.iter().map(|t| format!("{} .", t.render(px))).collect::<Vec<_>>().join(" "),
            GraphPattern::And(a, b) => join_parts(left_part(a, px), format!("{{ {} }}", b.render(px))),
            GraphPattern::Union(a, b) => format!("{{ {} }} UNION {{ {} }}", a.render(px), b.render(px)),
            GraphPattern::Opt(a, b) => join_parts(left_part(a, px), format!("OPTIONAL {{ {} }}", b.render(px))),
            GraphPattern::Filter(p, k) => {
                let inner = match **p {
                    GraphPattern::Filter(..) => format!("{{ {} }}", p.render(px)),
                    _ => p.render(px),
                };
                join_parts(inner, format!("FILTER({})", k.render(px)))
            }
        }
    }
}

fn join_parts(a: String, b: String) -> String {
    if a.is_empty() {
        b
    } else {
        format!("{a} {b}")
    }
}

// A filter on the left would swallow the whole group when reparsed.
fn left_part(p: &GraphPattern, px: &Prefixes) -> String {
    match p {
        GraphPattern::Filter(..) => format!("{{ {} }}", p.render(px)),
        _ => p.render(px),
    }
}

fn mention_triple(t: &TriplePattern, out: &mut dyn FnMut(&str)) {
    for term in [&t.s, &t.o] {
        if let Term::Variable(v) = term {
            out(v);
        }
    }
    match &t.p {
        Predicate::Term(Term::Variable(v)) => out(v),
        Predicate::Term(_) => {}
        Predicate::Path(e) => mention_path(e, out),
    }
}

fn mention_path(e: &PathExpr, out: &mut dyn FnMut(&str)) {
    e.walk_leaves(&mut |leaf| match leaf {
        PathExpr::VarAtom(v) => out(v),
        PathExpr::Nested(_, inner) => mention_path(inner, out),
        PathExpr::Constrained(_, c) => {
            out(&c.head);
            for t in &c.body {
                mention_triple(t, out);
            }
            if let Some(k) = &c.filter {
                k.variables().iter().for_each(|v| out(v));
            }
        }
        _ => {}
    });
}

impl fmt::Display for GraphPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Prefixes::default()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Select {
    All,
    Vars(Vec<Var>),
}

/// `SELECT B FROM u WHERE P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub select: Select,
    pub from: Option<Term>,
    pub pattern: GraphPattern,
    /// Prefixes declared by the query text, used when printing.
    pub prefixes: Prefixes,
}

impl Query {
    pub fn new(select: Select, pattern: GraphPattern) -> Self {
        Query {
            select,
            from: None,
            pattern,
            prefixes: Prefixes::default(),
        }
    }

    /// The projection list B, in order. `SELECT *` selects ℬ(P) sorted.
    pub fn projection(&self) -> Vec<Var> {
        match &self.select {
            Select::All => self.pattern.variables().into_iter().collect(),
            Select::Vars(vs) => vs.clone(),
        }
    }

    /// Rejects selected variables that the pattern never binds.
    pub fn validate(&self) -> Result<()> {
        if let Select::Vars(vs) = &self.select {
            let bound = self.pattern.variables();
            for v in vs {
                if !bound.contains(v) {
                    return Err(Error::InvalidQuery(format!(
                        "selected variable ?{v} does not appear in the pattern"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let px = &self.prefixes;
        let mut out = String::new();
        let defaults = Prefixes::default();
        for (name, iri) in px.entries() {
            if defaults.get(name) != Some(iri) {
                out.push_str(&format!("PREFIX {name}: <{iri}>\n"));
            }
        }
        out.push_str("SELECT");
        match &self.select {
            Select::All => out.push_str(" *"),
            Select::Vars(vs) => {
                for v in vs {
                    out.push_str(&format!(" ?{v}"));
                }
            }
        }
        if let Some(u) = &self.from {
            out.push_str(&format!(" FROM {}", px.render(u)));
        }
        out.push_str(&format!(" WHERE {{ {} }}", self.pattern.render(px)));
        out
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A default graph plus graphs reachable by `FROM <name>`.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub default: Graph,
    pub named: BTreeMap<Term, Graph>,
}

impl Dataset {
    pub fn new(default: Graph) -> Self {
        Dataset {
            default,
            named: BTreeMap::new(),
        }
    }

    pub fn with_named(mut self, name: Term, g: Graph) -> Self {
        self.named.insert(name, g);
        self
    }

    pub fn resolve(&self, from: Option<&Term>) -> Result<&Graph> {
        match from {
            None => Ok(&self.default),
            Some(u) => self
                .named
                .get(u)
                .ok_or_else(|| Error::UnknownGraph(u.to_string())),
        }
    }
}
