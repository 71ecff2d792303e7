use std::collections::BTreeSet;
use std::rc::Rc;

use crate::closure::non_reflexive_closure;
use crate::error::{Error, Result};
use crate::filter::eval_filter;
use crate::graph::Graph;
use crate::homomorphism::{find_homomorphisms, BasicGraphPattern};
use crate::path::{Dialect, Evaluator};
use crate::query::map::{difference, join, merge, AnswerSet, Map, Var};
use crate::query::pattern::{Dataset, GraphPattern, Predicate, Query, TriplePattern};
use crate::term::Term;

impl Evaluator<'_> {
    /// Answers to one triple pattern, memoized per evaluator.
    pub fn eval_triple(&self, t: &TriplePattern) -> Rc<AnswerSet> {
        if let Some(hit) = self.triples.borrow().get(t) {
            return hit.clone();
        }
        let answers = Rc::new(match &t.p {
            Predicate::Term(_) => {
                let triple = t.as_triple().expect("term predicate");
                find_homomorphisms(self.g, &BasicGraphPattern::new(vec![triple]))
            }
            Predicate::Path(e) => self.eval_path_triple(&t.s, e, &t.o),
        });
        self.triples.borrow_mut().insert(t.clone(), answers.clone());
        answers
    }

    /// Joins the triples left to right in a greedy most-bound-first order,
    /// instantiating each triple with the bindings found so far.
    pub fn eval_bgp(&self, triples: &[TriplePattern]) -> AnswerSet {
        let plain: Option<Vec<_>> = triples.iter().map(TriplePattern::as_triple).collect();
        if let Some(plain) = plain {
            return find_homomorphisms(self.g, &BasicGraphPattern::new(plain));
        }
        let mut maps = vec![Map::new()];
        for t in plan(triples) {
            let mut next = AnswerSet::new();
            for m in &maps {
                let inst = instantiate(t, m);
                for sigma in self.eval_triple(&inst).iter() {
                    if let Some(merged) = merge(m, sigma) {
                        next.insert(merged);
                    }
                }
            }
            maps = next.into_iter().collect();
            if maps.is_empty() {
                break;
            }
        }
        maps.into_iter().collect()
    }

    pub fn eval_pattern(&self, p: &GraphPattern) -> AnswerSet {
        match p {
            GraphPattern::Bgp(ts) => self.eval_bgp(ts),
            GraphPattern::And(a, b) => join(&self.eval_pattern(a), &self.eval_pattern(b)),
            GraphPattern::Union(a, b) => {
                let mut out = self.eval_pattern(a);
                out.extend(self.eval_pattern(b));
                out
            }
            GraphPattern::Opt(a, b) => {
                let (l, r) = (self.eval_pattern(a), self.eval_pattern(b));
                let mut out = join(&l, &r);
                out.extend(difference(&l, &r));
                out
            }
            GraphPattern::Filter(p, k) => self.eval_pattern(p).into_iter().filter(|m| eval_filter(m, k)).collect(),
        }
    }
}

fn is_bound(t: &Term, bound: &BTreeSet<Var>) -> bool {
    match t {
        Term::Variable(v) => bound.contains(v),
        _ => true,
    }
}

fn plan(triples: &[TriplePattern]) -> Vec<&TriplePattern> {
    let mut bound = BTreeSet::new();
    let mut left: Vec<&TriplePattern> = triples.iter().collect();
    let mut order = Vec::with_capacity(triples.len());
    let score = |t: &TriplePattern, bound: &BTreeSet<Var>| {
        let p = match &t.p {
            Predicate::Term(p) => is_bound(p, bound),
            Predicate::Path(_) => true,
        };
        usize::from(is_bound(&t.s, bound)) + usize::from(p) + usize::from(is_bound(&t.o, bound))
    };
    while !left.is_empty() {
        // highest score, earliest on ties
        let mut best = 0;
        for i in 1..left.len() {
            if score(left[i], &bound) > score(left[best], &bound) {
                best = i;
            }
        }
        let t = left.remove(best);
        bound.extend(t.variables());
        order.push(t);
    }
    order
}

fn instantiate(t: &TriplePattern, m: &Map) -> TriplePattern {
    let sub = |term: &Term| match term {
        Term::Variable(v) => m.value(v).cloned().unwrap_or_else(|| term.clone()),
        c => c.clone(),
    };
    let p = match &t.p {
        Predicate::Term(p) => Predicate::Term(sub(p)),
        Predicate::Path(e) => {
            let mut e = e.clone();
            for x in e.exported_vars() {
                if let Some(value) = m.value(&x) {
                    e = e.substitute(&x, value);
                }
            }
            Predicate::Path(e)
        }
    };
    TriplePattern {
        s: sub(&t.s),
        p,
        o: sub(&t.o),
    }
}

/// Answers to a single triple pattern.
pub fn eval_triple(g: &Graph, t: &TriplePattern, dialect: Dialect) -> Result<AnswerSet> {
    t.check_dialect(dialect)?;
    Ok((*Evaluator::new(g).eval_triple(t)).clone())
}

/// S(P, G): the answers to a graph pattern, before projection.
pub fn eval_pattern(g: &Graph, p: &GraphPattern, dialect: Dialect) -> Result<AnswerSet> {
    p.check_dialect(dialect)?;
    Ok(Evaluator::new(g).eval_pattern(p))
}

/// Answers to `q` over the dataset: restriction and null completion to the
/// selected variables.
pub fn answer_query_in(q: &Query, ds: &Dataset, dialect: Dialect) -> Result<AnswerSet> {
    answer_over(q, ds.resolve(q.from.as_ref())?, dialect)
}

/// Answers to `q` over a dataset whose only graph is `g`, so any `FROM`
/// clause is an unknown graph.
pub fn answer_query(q: &Query, g: &Graph, dialect: Dialect) -> Result<AnswerSet> {
    if let Some(u) = &q.from {
        return Err(Error::UnknownGraph(u.to_string()));
    }
    answer_over(q, g, dialect)
}

fn answer_over(q: &Query, g: &Graph, dialect: Dialect) -> Result<AnswerSet> {
    let answers = eval_pattern(g, &q.pattern, dialect)?;
    let vars = q.projection();
    Ok(answers.iter().map(|m| m.project(&vars)).collect())
}

/// RDFS answers by evaluating `q` over the non-reflexive closure of `g`
/// bounded by the query's own triples.
pub fn answers_via_closure(q: &Query, g: &Graph) -> Result<AnswerSet> {
    q.pattern.check_dialect(Dialect::Sparql)?;
    let closed = non_reflexive_closure(g, &q.pattern.context())?;
    answer_query(q, &closed, Dialect::Sparql)
}
