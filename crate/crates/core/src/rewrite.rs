//! Query rewritings that encode the RDFS rules into path expressions, so
//! that plain evaluation of the rewritten query over G gives the RDFS
//! answers of the original query.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Axis;
use crate::path::{Constraint, Dialect, PathExpr};
use crate::query::map::Var;
use crate::query::pattern::{GraphPattern, Predicate, Query, TriplePattern};
use crate::term::{vocab, Term};

pub use crate::path::trans;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewriteMode {
    /// Regular expressions over IRIs with variables.
    PsparqlTau,
    /// Nested regular expressions.
    NsparqlPhi,
    /// Constrained regular expressions.
    CpsparqlTau,
}

impl RewriteMode {
    pub const ALL: [RewriteMode; 3] = [RewriteMode::PsparqlTau, RewriteMode::NsparqlPhi, RewriteMode::CpsparqlTau];

    pub fn name(self) -> &'static str {
        match self {
            RewriteMode::PsparqlTau => "psparql-tau",
            RewriteMode::NsparqlPhi => "nsparql-phi",
            RewriteMode::CpsparqlTau => "cpsparql-tau",
        }
    }

    /// The language the rewritten query is written in.
    pub fn target(self) -> Dialect {
        match self {
            RewriteMode::PsparqlTau => Dialect::Psparql,
            RewriteMode::NsparqlPhi => Dialect::Nsparql,
            RewriteMode::CpsparqlTau => Dialect::Cpsparql,
        }
    }
}

impl fmt::Display for RewriteMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RewriteMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RewriteMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown rewrite mode `{s}`")))
    }
}

/// Source of variables that collide with nothing in the query.
#[derive(Debug, Clone, Default)]
pub struct FreshVars {
    taken: BTreeSet<String>,
    counter: usize,
}

impl FreshVars {
    pub fn avoiding<I: IntoIterator<Item = String>>(taken: I) -> Self {
        FreshVars {
            taken: taken.into_iter().collect(),
            counter: 0,
        }
    }

    pub fn for_pattern(p: &GraphPattern) -> Self {
        FreshVars::avoiding(p.mentioned_vars())
    }

    pub fn fresh(&mut self) -> Var {
        loop {
            self.counter += 1;
            let name = format!("f{}", self.counter);
            if self.taken.insert(name.clone()) {
                return Var::from(name);
            }
        }
    }
}

fn iri(s: &str) -> Term {
    Term::iri(s)
}

fn atom(s: &str) -> PathExpr {
    PathExpr::Atom(iri(s))
}

fn next(s: &str) -> PathExpr {
    PathExpr::next(iri(s))
}

fn is(p: &Term, name: &str) -> bool {
    p.is_iri_eq(name)
}

/// τ for PSPARQL: one triple to a graph pattern.
pub fn tau_ps(t: &TriplePattern, fresh: &mut FreshVars) -> GraphPattern {
    let p = match &t.p {
        Predicate::Term(p @ Term::Iri(_)) => p,
        _ => return GraphPattern::Bgp(vec![t.clone()]),
    };
    let (s, o) = (t.s.clone(), t.o.clone());
    if is(p, vocab::SUB_CLASS_OF) || is(p, vocab::SUB_PROPERTY_OF) {
        return GraphPattern::Bgp(vec![TriplePattern::path(s, PathExpr::plus(PathExpr::Atom(p.clone())), o)]);
    }
    if is(p, vocab::TYPE) {
        let sc_star = || PathExpr::star(atom(vocab::SUB_CLASS_OF));
        let via = |schema: &str| {
            PathExpr::seq_all([PathExpr::star(atom(vocab::SUB_PROPERTY_OF)), atom(schema), sc_star()])
        };
        let direct = GraphPattern::Bgp(vec![TriplePattern::path(
            s.clone(),
            PathExpr::seq(atom(vocab::TYPE), sc_star()),
            o.clone(),
        )]);
        let (p1, y1) = (Term::Variable(fresh.fresh()), Term::Variable(fresh.fresh()));
        let by_domain = GraphPattern::Bgp(vec![
            TriplePattern::plain(s.clone(), p1.clone(), y1),
            TriplePattern::path(p1, via(vocab::DOMAIN), o.clone()),
        ]);
        let (p2, y2) = (Term::Variable(fresh.fresh()), Term::Variable(fresh.fresh()));
        let by_range = GraphPattern::Bgp(vec![
            TriplePattern::plain(y2, p2.clone(), s),
            TriplePattern::path(p2, via(vocab::RANGE), o),
        ]);
        return GraphPattern::union(GraphPattern::union(direct, by_domain), by_range);
    }
    let f = Term::Variable(fresh.fresh());
    GraphPattern::Bgp(vec![
        TriplePattern::plain(s, f.clone(), o),
        TriplePattern::path(f, PathExpr::star(atom(vocab::SUB_PROPERTY_OF)), p.clone()),
    ])
}

/// τ for PSPARQL over a basic graph pattern: plain expansions are kept in
/// one BGP, each `type` triple adds a UNION block.
fn tau_ps_bgp(triples: &[TriplePattern], fresh: &mut FreshVars) -> GraphPattern {
    let mut plain = Vec::new();
    let mut blocks = Vec::new();
    for t in triples {
        match tau_ps(t, fresh) {
            GraphPattern::Bgp(ts) => plain.extend(ts),
            block => blocks.push(block),
        }
    }
    let mut out = if plain.is_empty() && !blocks.is_empty() {
        None
    } else {
        Some(GraphPattern::Bgp(plain))
    };
    for b in blocks {
        out = Some(match out {
            None => b,
            Some(p) => GraphPattern::and(p, b),
        });
    }
    out.expect("non-empty by construction")
}

fn type_expr() -> PathExpr {
    let sc_star = || PathExpr::star(next(vocab::SUB_CLASS_OF));
    let sp_star = || PathExpr::star(next(vocab::SUB_PROPERTY_OF));
    let direct = PathExpr::seq(next(vocab::TYPE), sc_star());
    let by_domain = PathExpr::seq_all([PathExpr::Axis(Axis::EDGE), sp_star(), next(vocab::DOMAIN), sc_star()]);
    let by_range = PathExpr::seq_all([PathExpr::Axis(Axis::NODE_INV), sp_star(), next(vocab::RANGE), sc_star()]);
    PathExpr::alt(PathExpr::alt(direct, by_domain), by_range)
}

/// The ρdf part shared by φ and τ_cp; `None` for ordinary predicates.
fn rho_df_expr(p: &Term) -> Option<PathExpr> {
    if is(p, vocab::SUB_CLASS_OF) || is(p, vocab::SUB_PROPERTY_OF) {
        Some(PathExpr::plus(PathExpr::next(p.clone())))
    } else if is(p, vocab::DOMAIN) || is(p, vocab::RANGE) {
        Some(PathExpr::next(p.clone()))
    } else if is(p, vocab::TYPE) {
        Some(type_expr())
    } else {
        None
    }
}

/// φ(p) for a constant predicate.
pub fn phi_predicate(p: &Term) -> PathExpr {
    rho_df_expr(p).unwrap_or_else(|| {
        PathExpr::nested(
            Axis::NEXT,
            PathExpr::seq(PathExpr::star(next(vocab::SUB_PROPERTY_OF)), PathExpr::Test(Axis::SELF, p.clone())),
        )
    })
}

/// τ_cp(p) for a constant predicate; `head` names the constraint variable.
pub fn tau_cp_predicate(p: &Term, head: Var) -> PathExpr {
    rho_df_expr(p).unwrap_or_else(|| {
        PathExpr::constrained(
            Axis::NEXT,
            Constraint::closed_single(head, PathExpr::star(next(vocab::SUB_PROPERTY_OF)), p.clone()),
        )
    })
}

/// Rewrites the `next::p`, `next^-1::p` and bare `p` leaves of a path with
/// `f(p)`; other leaves are kept.
fn rewrite_leaves(e: &PathExpr, f: &mut dyn FnMut(&Term) -> PathExpr) -> PathExpr {
    e.map_leaves(&mut |leaf| match leaf {
        PathExpr::Test(a, p) if *a == Axis::NEXT && p.is_iri() => Some(f(p)),
        PathExpr::Test(a, p) if *a == Axis::NEXT_INV && p.is_iri() => Some(f(p).inverse()),
        PathExpr::Atom(p) => Some(f(p)),
        _ => None,
    })
}

/// φ: one triple to an nSPARQL triple. Variable predicates are rejected.
pub fn phi(t: &TriplePattern) -> Result<TriplePattern> {
    let p = match &t.p {
        Predicate::Term(Term::Variable(v)) => {
            return Err(Error::Dialect(format!(
                "variable predicate ?{v} cannot be expressed with nested regular expressions"
            )))
        }
        Predicate::Term(p) => phi_predicate(p),
        Predicate::Path(e) => rewrite_leaves(e, &mut phi_predicate),
    };
    Ok(TriplePattern::path(t.s.clone(), p, t.o.clone()))
}

/// τ_cp: one triple to a cpSPARQL triple. Variable predicates become open
/// constraints that export the variable.
pub fn tau_cp(t: &TriplePattern, fresh: &mut FreshVars) -> TriplePattern {
    let p = match &t.p {
        Predicate::Term(Term::Variable(v)) => PathExpr::constrained(Axis::NEXT, Constraint::open_true(v)),
        Predicate::Term(p) => tau_cp_predicate(p, fresh.fresh()),
        Predicate::Path(e) => rewrite_leaves(e, &mut |p| tau_cp_predicate(p, fresh.fresh())),
    };
    TriplePattern::path(t.s.clone(), p, t.o.clone())
}

/// Rewrites every BGP of the pattern; operators and filters are kept.
/// Triples must be plain SPARQL or, for φ and τ_cp, paths of the target
/// language, whose `next::p` leaves get the same treatment as predicates.
pub fn rewrite_pattern(p: &GraphPattern, mode: RewriteMode) -> Result<GraphPattern> {
    let mut bad = Ok(());
    p.for_each_triple(&mut |t| {
        if bad.is_ok() && t.check_dialect(Dialect::Sparql).is_err() {
            bad = match mode {
                RewriteMode::PsparqlTau => t.check_dialect(Dialect::Sparql),
                RewriteMode::NsparqlPhi => t.check_dialect(Dialect::Nsparql),
                RewriteMode::CpsparqlTau => t.check_dialect(Dialect::CpsparqlFull),
            };
        }
    });
    bad?;
    let mut fresh = FreshVars::for_pattern(p);
    p.try_map_bgps(&mut |ts| match mode {
        RewriteMode::PsparqlTau => Ok(tau_ps_bgp(ts, &mut fresh)),
        RewriteMode::NsparqlPhi => Ok(GraphPattern::Bgp(ts.iter().map(phi).collect::<Result<_>>()?)),
        RewriteMode::CpsparqlTau => Ok(GraphPattern::Bgp(ts.iter().map(|t| tau_cp(t, &mut fresh)).collect())),
    })
}

/// The rewritten query: same projection and graph, rewritten pattern.
pub fn rewrite_query(q: &Query, mode: RewriteMode) -> Result<Query> {
    let mut out = q.clone();
    // `SELECT *` must not start returning the fresh variables
    out.select = crate::query::Select::Vars(q.projection());
    out.pattern = rewrite_pattern(&q.pattern, mode)?;
    Ok(out)
}
