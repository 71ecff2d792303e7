use rand::seq::SliceRandom;
use rand::Rng;

use crate::filter::{CmpOp, FilterExpr};
use crate::graph::{Axis, Graph};
use crate::path::{Constraint, PathExpr};
use crate::query::pattern::{GraphPattern, Query, Select, TriplePattern};
use crate::term::Term;

/// Shape of a random genuine graph.
#[derive(Debug, Clone)]
pub struct GraphParams {
    pub nodes: usize,
    pub edges: usize,
    /// Share of triples that are sc/sp/dom/range statements.
    pub schema_fraction: f64,
    /// Share of data triples that are `type` statements.
    pub type_ratio: f64,
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams {
            nodes: 10,
            edges: 20,
            schema_fraction: 0.3,
            type_ratio: 0.25,
        }
    }
}

fn names(prefix: &str, n: usize) -> Vec<Term> {
    (0..n).map(|i| Term::iri(format!("{prefix}{i}"))).collect()
}

fn pick<R: Rng>(rng: &mut R, xs: &[Term]) -> Term {
    xs.choose(rng).expect("non-empty choice").clone()
}

/// A graph whose ρdf terms occur only as predicates. Nodes are `n0…`,
/// properties `p0…` and classes `C0…`.
pub fn random_genuine_graph<R: Rng>(rng: &mut R, params: &GraphParams) -> Graph {
    let nodes = names("n", params.nodes.max(1));
    let props = names("p", (params.nodes / 4).clamp(2, 4));
    let classes = names("C", (params.nodes / 4).clamp(2, 4));
    let mut triples = Vec::with_capacity(params.edges);
    for _ in 0..params.edges {
        let t = if rng.gen_bool(params.schema_fraction) {
            match rng.gen_range(0..4) {
                0 => (pick(rng, &props), Term::sub_property_of(), pick(rng, &props)),
                1 => (pick(rng, &classes), Term::sub_class_of(), pick(rng, &classes)),
                2 => (pick(rng, &props), Term::domain(), pick(rng, &classes)),
                _ => (pick(rng, &props), Term::range(), pick(rng, &classes)),
            }
        } else if rng.gen_bool(params.type_ratio) {
            (pick(rng, &nodes), Term::rdf_type(), pick(rng, &classes))
        } else {
            (pick(rng, &nodes), pick(rng, &props), pick(rng, &nodes))
        };
        triples.push(crate::term::Triple::new(t.0, t.1, t.2));
    }
    Graph::from_triples(triples).expect("generated triples are ground")
}

/// `SELECT * { … }` with up to `max_triples` triples over constant
/// predicates, using the non-ρdf terms of `g` as constants.
pub fn random_bgp_query<R: Rng>(rng: &mut R, g: &Graph, max_triples: usize) -> Query {
    let constants: Vec<Term> = g.voc().iter().filter(|t| !t.is_rho_df()).cloned().collect();
    let constants = if constants.is_empty() { vec![Term::iri("n0")] } else { constants };
    let mut preds: Vec<Term> = g.predicates().into_iter().filter(|p| !p.is_rho_df()).collect();
    preds.extend([
        Term::rdf_type(),
        Term::sub_class_of(),
        Term::sub_property_of(),
        Term::domain(),
        Term::range(),
    ]);
    let vars = [Term::var("a"), Term::var("b"), Term::var("c")];
    let position = |rng: &mut R| {
        if rng.gen_bool(0.7) {
            pick(rng, &vars)
        } else {
            pick(rng, &constants)
        }
    };
    let n = rng.gen_range(1..=max_triples.max(1));
    let triples = (0..n)
        .map(|_| {
            let s = position(rng);
            let p = pick(rng, &preds);
            let o = position(rng);
            TriplePattern::plain(s, p, o)
        })
        .collect();
    Query::new(Select::All, GraphPattern::Bgp(triples))
}

fn random_axis<R: Rng>(rng: &mut R) -> Axis {
    *Axis::ALL.choose(rng).expect("axes")
}

/// A nested regular expression of the given depth over `labels`.
pub fn random_nested<R: Rng>(rng: &mut R, labels: &[Term], depth: usize) -> PathExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..3) {
            0 => PathExpr::Axis(random_axis(rng)),
            1 => PathExpr::Test(random_axis(rng), pick(rng, labels)),
            _ => PathExpr::nested(random_axis(rng), random_nested(rng, labels, depth.saturating_sub(1))),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => PathExpr::seq(random_nested(rng, labels, d), random_nested(rng, labels, d)),
        1 => PathExpr::alt(random_nested(rng, labels, d), random_nested(rng, labels, d)),
        2 => PathExpr::star(random_nested(rng, labels, d)),
        _ => PathExpr::plus(random_nested(rng, labels, d)),
    }
}

/// An expression mixing atoms, tests, constraints and the occasional
/// exported variable.
pub fn random_constrained<R: Rng>(rng: &mut R, labels: &[Term], depth: usize) -> PathExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        let axis = random_axis(rng);
        return match rng.gen_range(0..8) {
            0 => PathExpr::Atom(pick(rng, labels)),
            1 => PathExpr::NegAtom(pick(rng, labels)),
            2 => PathExpr::Test(axis, pick(rng, labels)),
            3 => {
                let inner = random_constrained(rng, labels, depth.saturating_sub(1));
                let object = if rng.gen_bool(0.5) { Term::var("y") } else { pick(rng, labels) };
                let inner = if inner.is_closed() { inner } else { PathExpr::Atom(pick(rng, labels)) };
                PathExpr::constrained(axis, Constraint::closed_single("x", inner, object))
            }
            4 => {
                let mut c = Constraint::closed_single("x", PathExpr::Atom(pick(rng, labels)), Term::var("y"));
                c.body.clear();
                c.filter = Some(FilterExpr::cmp(CmpOp::Ne, Term::var("x"), pick(rng, labels)));
                PathExpr::constrained(axis, c)
            }
            5 => PathExpr::constrained(axis, Constraint::open_true("v")),
            6 => PathExpr::Epsilon,
            _ => PathExpr::Axis(axis),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => PathExpr::seq(random_constrained(rng, labels, d), random_constrained(rng, labels, d)),
        1 => PathExpr::alt(random_constrained(rng, labels, d), random_constrained(rng, labels, d)),
        2 => PathExpr::star(random_constrained(rng, labels, d)),
        _ => PathExpr::plus(random_constrained(rng, labels, d)),
    }
}
