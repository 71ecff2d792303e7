//! Brute-force reference implementations. They share no evaluation code with
//! the engines: closure by blind re-matching, paths by bottom-up relational
//! evaluation, patterns by backtracking over the vocabulary.

mod gen;

use std::collections::{BTreeSet, HashMap};

pub use gen::{random_bgp_query, random_constrained, random_genuine_graph, random_nested, GraphParams};

use crate::closure::{axiomatic_triples, max_container_index, ClosureConfig, RuleId};
use crate::error::{Error, Result};
use crate::filter::eval_filter;
use crate::graph::{Axis, AxisKind, Graph};
use crate::path::PathExpr;
use crate::query::map::{difference, join, AnswerSet, Map, Var};
use crate::query::pattern::{GraphPattern, Predicate, TriplePattern};
use crate::term::{vocab, Term, Triple};

const CAP_FALLBACK: usize = crate::closure::DEFAULT_TRIPLE_CAP;

/// Conclusions of one application of `rule` to every premise pair of `set`.
fn apply_rule(rule: &RuleId, set: &BTreeSet<Triple>) -> Vec<Triple> {
    let with_p = |p: &'static str| set.iter().filter(move |t| t.p.is_iri_eq(p));
    let mut out = Vec::new();
    let mut push = |s: &Term, p: &Term, o: &Term| {
        if p.is_iri() {
            out.push(Triple::new(s.clone(), p.clone(), o.clone()));
        }
    };
    let sp = Term::sub_property_of();
    let sc = Term::sub_class_of();
    let ty = Term::rdf_type();
    match rule {
        RuleId::SpTrans | RuleId::Rdfs8b | RuleId::ScTrans | RuleId::Rdfs12b => {
            let rel = if matches!(rule, RuleId::SpTrans | RuleId::Rdfs8b) { &sp } else { &sc };
            for a in set.iter().filter(|t| &t.p == rel) {
                for b in set.iter().filter(|t| &t.p == rel) {
                    if a.o == b.s {
                        push(&a.s, rel, &b.o);
                    }
                }
            }
        }
        RuleId::SpInherit | RuleId::Rdfs9 => {
            for a in with_p(vocab::SUB_PROPERTY_OF) {
                for b in set.iter().filter(|t| t.p == a.s) {
                    push(&b.s, &a.o, &b.o);
                }
            }
        }
        RuleId::ScType | RuleId::Rdfs11 => {
            for a in with_p(vocab::SUB_CLASS_OF) {
                for b in with_p(vocab::TYPE) {
                    if b.o == a.s {
                        push(&b.s, &ty, &a.o);
                    }
                }
            }
        }
        RuleId::DomType | RuleId::Rdfs6 | RuleId::RangeType | RuleId::Rdfs7 => {
            let (schema, domain) = if matches!(rule, RuleId::DomType | RuleId::Rdfs6) {
                (vocab::DOMAIN, true)
            } else {
                (vocab::RANGE, false)
            };
            for a in with_p(schema) {
                for b in set.iter().filter(|t| t.p == a.s) {
                    push(if domain { &b.s } else { &b.o }, &ty, &a.o);
                }
            }
        }
        RuleId::Rdf2 => {
            for t in set {
                push(&t.p, &ty, &Term::iri(vocab::PROPERTY));
            }
        }
        RuleId::Rdfs8a | RuleId::Rdfs10 | RuleId::Rdfs12a | RuleId::Rdfs13 | RuleId::Rdfs14 => {
            let (class, p, o): (&str, &Term, Option<&str>) = match rule {
                RuleId::Rdfs8a => (vocab::PROPERTY, &sp, None),
                RuleId::Rdfs10 => (vocab::CLASS, &sc, Some(vocab::RESOURCE)),
                RuleId::Rdfs12a => (vocab::CLASS, &sc, None),
                RuleId::Rdfs13 => (vocab::CONTAINER_MEMBERSHIP_PROPERTY, &sp, Some(vocab::MEMBER)),
                _ => (vocab::DATATYPE, &sc, Some(vocab::LITERAL)),
            };
            for t in with_p(vocab::TYPE).filter(|t| t.o.is_iri_eq(class)) {
                let o = o.map(Term::iri).unwrap_or_else(|| t.s.clone());
                push(&t.s, p, &o);
            }
        }
    }
    out
}

/// Closure by applying every rule to the whole set until nothing changes.
pub fn naive_closure(g: &Graph, cfg: &ClosureConfig) -> Result<Graph> {
    let mut set: BTreeSet<Triple> = g.triples().collect();
    if cfg.axiomatic {
        let h = cfg
            .context
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("axiomatic triples need a context pattern".into()))?;
        let k = max_container_index(g.triples().chain(h.triples.iter().cloned()));
        set.extend(axiomatic_triples(k));
    }
    let base = set.len();
    let cap = cfg.cap.unwrap_or(CAP_FALLBACK);
    let rules = cfg.rules();
    loop {
        let before = set.len();
        let derived: Vec<Triple> = rules.iter().flat_map(|r| apply_rule(r, &set)).collect();
        set.extend(derived);
        if set.len() - base > cap {
            return Err(Error::TripleCap { cap });
        }
        if set.len() == before {
            return Graph::from_triples(set);
        }
    }
}

/// Rule instances whose premises are in `g` but whose conclusion is not.
pub fn rule_violations(g: &Graph, rules: &[RuleId]) -> Vec<(RuleId, Triple)> {
    let set: BTreeSet<Triple> = g.triples().collect();
    let mut out = Vec::new();
    for r in rules {
        for t in apply_rule(r, &set) {
            if !set.contains(&t) {
                out.push((r.clone(), t));
            }
        }
    }
    out
}

/// A path relation as (from, to, label) triples.
pub type Relation = BTreeSet<(Term, Term, Term)>;

fn axis_relation(g: &Graph, axis: Axis) -> Relation {
    let mut out = Relation::new();
    if axis.kind == AxisKind::SelfAxis {
        for u in g.voc() {
            out.insert((u.clone(), u.clone(), u.clone()));
        }
        return out;
    }
    for t in g.triples() {
        let (from, to, label) = match axis.kind {
            AxisKind::Next => (t.s, t.o, t.p),
            AxisKind::Edge => (t.s, t.p, t.o),
            AxisKind::Node => (t.p, t.o, t.s),
            AxisKind::SelfAxis => unreachable!(),
        };
        if axis.inverted {
            out.insert((to, from, label));
        } else {
            out.insert((from, to, label));
        }
    }
    out
}

fn compose(a: &Relation, b: &Relation) -> Relation {
    let mut by_from: HashMap<&Term, Vec<(&Term, &Term)>> = HashMap::new();
    for (x, y, z) in b {
        by_from.entry(x).or_default().push((y, z));
    }
    let mut out = Relation::new();
    for (x, w, _) in a {
        for (y, z) in by_from.get(w).into_iter().flatten() {
            out.insert((x.clone(), (*y).clone(), (*z).clone()));
        }
    }
    out
}

/// [[e]] as labeled triples, for an expression without exported variables.
pub fn denot_eval(g: &Graph, e: &PathExpr) -> Relation {
    match e {
        PathExpr::Axis(a) => axis_relation(g, *a),
        PathExpr::Test(a, l) => axis_relation(g, *a).into_iter().filter(|t| &t.2 == l).collect(),
        PathExpr::Atom(l) => axis_relation(g, Axis::NEXT).into_iter().filter(|t| &t.2 == l).collect(),
        PathExpr::NegAtom(l) => axis_relation(g, Axis::NEXT).into_iter().filter(|t| &t.2 != l).collect(),
        PathExpr::Nested(a, inner) => {
            let starts: BTreeSet<Term> = denot_eval(g, inner).into_iter().map(|t| t.0).collect();
            axis_relation(g, *a).into_iter().filter(|t| starts.contains(&t.2)).collect()
        }
        PathExpr::Constrained(a, c) => {
            let mut memo: HashMap<Term, bool> = HashMap::new();
            axis_relation(g, *a)
                .into_iter()
                .filter(|t| *memo.entry(t.2.clone()).or_insert_with(|| satisfies(g, &t.2, c)))
                .collect()
        }
        PathExpr::VarAtom(v) => panic!("denot_eval needs a variable-free expression, found ?{v}"),
        PathExpr::Epsilon => axis_relation(g, Axis::SELF),
        PathExpr::Seq(a, b) => compose(&denot_eval(g, a), &denot_eval(g, b)),
        PathExpr::Alt(a, b) => {
            let mut out = denot_eval(g, a);
            out.extend(denot_eval(g, b));
            out
        }
        PathExpr::Star(a) => star(&axis_relation(g, Axis::SELF), &denot_eval(g, a)),
        PathExpr::Plus(a) => {
            let inner = denot_eval(g, a);
            compose(&inner, &star(&axis_relation(g, Axis::SELF), &inner))
        }
    }
}

// self ∪ e ∪ e/e ∪ … by Kleene iteration
fn star(self_rel: &Relation, e: &Relation) -> Relation {
    let mut acc = self_rel.clone();
    acc.extend(e.iter().cloned());
    loop {
        let step = compose(&acc, e);
        let before = acc.len();
        acc.extend(step);
        if acc.len() == before {
            return acc;
        }
    }
}

/// Whether label `z` satisfies the constraint: some assignment of the body
/// variables over voc(G) with the head set to `z` entails the body and
/// makes the filter true.
pub fn satisfies(g: &Graph, z: &Term, c: &crate::path::Constraint) -> bool {
    let mut fixed = Map::new();
    fixed.insert(c.head.clone(), Some(z.clone()));
    let answers = match bgp_answers(g, &c.body, fixed) {
        Ok(a) => a,
        Err(_) => return false,
    };
    answers
        .iter()
        .any(|m| c.filter.as_ref().is_none_or(|k| eval_filter(m, k)))
}

/// Pair projection of [[e]]; exported variables get one binding each, tried
/// over the whole vocabulary.
pub fn naive_path_eval(g: &Graph, e: &PathExpr) -> BTreeSet<(Term, Term)> {
    if let Some(x) = e.exported_vars().into_iter().next() {
        let mut out = BTreeSet::new();
        for b in g.voc() {
            out.extend(naive_path_eval(g, &e.substitute(&x, b)));
        }
        return out;
    }
    denot_eval(g, e).into_iter().map(|(a, b, _)| (a, b)).collect()
}

const MAX_VARS: usize = 6;
const MAX_VOC: usize = 40;

/// S(P, G) by the compositional definitions, with BGPs solved by
/// backtracking over voc(G). Refuses more than 6 variables or 40 terms.
pub fn naive_pattern_eval(g: &Graph, p: &GraphPattern) -> Result<AnswerSet> {
    let nvars = p.variables().len();
    if nvars > MAX_VARS || g.voc().len() > MAX_VOC {
        return Err(Error::TooLarge(format!(
            "{nvars} variables over {} terms (limits {MAX_VARS} and {MAX_VOC})",
            g.voc().len()
        )));
    }
    Ok(match p {
        GraphPattern::Bgp(ts) => bgp_answers(g, ts, Map::new())?,
        GraphPattern::And(a, b) => join(&naive_pattern_eval(g, a)?, &naive_pattern_eval(g, b)?),
        GraphPattern::Union(a, b) => {
            let mut out = naive_pattern_eval(g, a)?;
            out.extend(naive_pattern_eval(g, b)?);
            out
        }
        GraphPattern::Opt(a, b) => {
            let (l, r) = (naive_pattern_eval(g, a)?, naive_pattern_eval(g, b)?);
            let mut out = join(&l, &r);
            out.extend(difference(&l, &r));
            out
        }
        GraphPattern::Filter(inner, k) => naive_pattern_eval(g, inner)?
            .into_iter()
            .filter(|m| eval_filter(m, k))
            .collect(),
    })
}

/// Maps extending `fixed` to every variable of the triples such that each
/// instantiated triple holds. `fixed` stays in the result.
fn bgp_answers(g: &Graph, triples: &[TriplePattern], fixed: Map) -> Result<AnswerSet> {
    let mut vars: Vec<Var> = Vec::new();
    for t in triples {
        for v in t.variables() {
            if !vars.contains(&v) && !fixed.contains(&v) {
                vars.push(v);
            }
        }
    }
    let mut cache: HashMap<PathExpr, BTreeSet<(Term, Term)>> = HashMap::new();
    let mut out = AnswerSet::new();
    let mut current = fixed;
    assign(g, triples, &vars, 0, &mut current, &mut cache, &mut out);
    Ok(out)
}

fn resolve(m: &Map, t: &Term) -> Option<Term> {
    match t {
        Term::Variable(v) => m.value(v).cloned(),
        c => Some(c.clone()),
    }
}

/// `Some(holds)` once every variable of `t` is bound.
fn check(g: &Graph, t: &TriplePattern, m: &Map, cache: &mut HashMap<PathExpr, BTreeSet<(Term, Term)>>) -> Option<bool> {
    let s = resolve(m, &t.s)?;
    let o = resolve(m, &t.o)?;
    match &t.p {
        Predicate::Term(p) => {
            let p = resolve(m, p)?;
            Some(p.is_iri() && g.contains(&Triple::new(s, p, o)))
        }
        Predicate::Path(e) => {
            let mut e = e.clone();
            for x in e.exported_vars() {
                e = e.substitute(&x, &resolve(m, &Term::Variable(x.clone()))?);
            }
            let pairs = cache.entry(e.clone()).or_insert_with(|| naive_path_eval(g, &e));
            Some(pairs.contains(&(s, o)))
        }
    }
}

fn assign(
    g: &Graph,
    triples: &[TriplePattern],
    vars: &[Var],
    depth: usize,
    m: &mut Map,
    cache: &mut HashMap<PathExpr, BTreeSet<(Term, Term)>>,
    out: &mut AnswerSet,
) {
    // prune as soon as a fully bound triple fails
    for t in triples {
        if check(g, t, m, cache) == Some(false) {
            return;
        }
    }
    let Some(v) = vars.get(depth) else {
        out.insert(m.clone());
        return;
    };
    for value in g.voc() {
        m.insert(v.clone(), Some(value.clone()));
        assign(g, triples, vars, depth + 1, m, cache, out);
    }
    let mut restored = Map::new();
    for (k, val) in m.iter() {
        if k != v {
            restored.insert(k.clone(), val.clone());
        }
    }
    *m = restored;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::closure;
    use crate::ntriples::parse_ntriples;
    use crate::path::{parse_path, Dialect};

    #[test]
    fn sp_chain_of_five() {
        let g = parse_ntriples("p1 sp p2 .\np2 sp p3 .\np3 sp p4 .\np4 sp p5 .\np5 sp p6 .").unwrap();
        let c = naive_closure(&g, &ClosureConfig::rho_df()).unwrap();
        assert_eq!(c.len() - g.len(), 10);
        assert_eq!(c, closure(&g, &ClosureConfig::rho_df()).unwrap());
    }

    #[test]
    fn empty_graph() {
        assert!(naive_closure(&Graph::new(), &ClosureConfig::extended()).unwrap().is_empty());
        let e = parse_path("(next::zzz)*", Dialect::Mixed).unwrap();
        assert!(naive_path_eval(&Graph::new(), &e).is_empty());
    }

    #[test]
    fn self_relation() {
        let g = parse_ntriples("a p b .").unwrap();
        let r = denot_eval(&g, &PathExpr::Axis(Axis::SELF));
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|(x, y, z)| x == y && y == z));
    }

    #[test]
    fn counterexample() {
        let g = parse_ntriples("u s \"2\" .\nv s \"4\" .").unwrap();
        let e = parse_path("self::[?n: { ?n next::s ?s } FILTER(?s > 3)]", Dialect::Mixed).unwrap();
        assert_eq!(naive_path_eval(&g, &e), BTreeSet::from([(Term::iri("v"), Term::iri("v"))]));
    }

    #[test]
    fn guard_refuses_large_inputs() {
        let text: String = (0..50).map(|i| format!("n{i} p n{} .\n", i + 1)).collect();
        let g = parse_ntriples(&text).unwrap();
        let p = GraphPattern::Bgp(vec![TriplePattern::plain(Term::var("x"), Term::iri("p"), Term::var("y"))]);
        assert!(matches!(naive_pattern_eval(&g, &p), Err(Error::TooLarge(_))));
    }
}
