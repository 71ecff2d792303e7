mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use pathrdf::closure::{closure, non_reflexive_closure, ClosureConfig, RuleId};
use pathrdf::homomorphism::{find_homomorphisms, BasicGraphPattern};
use pathrdf::ntriples::{parse_ntriples, write_ntriples};
use pathrdf::oracle::rule_violations;
use pathrdf::path::{eval_all_pairs, parse_path, trans, Dialect, PathExpr};
use pathrdf::query::map::{difference, join, unit};
use pathrdf::query::{answer_query, eval_pattern, parse_query_with, GraphPattern, Query, Select, TriplePattern};
use pathrdf::rewrite::{phi, rewrite_query, tau_cp, FreshVars, RewriteMode};
use pathrdf::{answer, Axis, AxisKind, AxisStep, EntailmentMode, Graph, Prefixes, Term, Triple};

const NODES: [&str; 6] = ["n0", "n1", "n2", "n3", "n4", "n5"];
const PROPS: [&str; 3] = ["p0", "p1", "p2"];
const CLASSES: [&str; 3] = ["C0", "C1", "C2"];

fn iri(s: &str) -> Term {
    Term::iri(s)
}

/// One genuine triple: data edges, typing, or schema statements.
fn triple() -> impl Strategy<Value = Triple> {
    let node = prop::sample::select(&NODES[..]).prop_map(iri);
    let prop = prop::sample::select(&PROPS[..]).prop_map(iri);
    let class = prop::sample::select(&CLASSES[..]).prop_map(iri);
    prop_oneof![
        4 => (node.clone(), prop.clone(), node.clone()).prop_map(|(s, p, o)| Triple::new(s, p, o)),
        1 => (node, class.clone()).prop_map(|(s, o)| Triple::new(s, Term::rdf_type(), o)),
        1 => (prop.clone(), prop.clone()).prop_map(|(s, o)| Triple::new(s, Term::sub_property_of(), o)),
        1 => (class.clone(), class.clone()).prop_map(|(s, o)| Triple::new(s, Term::sub_class_of(), o)),
        1 => (prop.clone(), class.clone()).prop_map(|(s, o)| Triple::new(s, Term::domain(), o)),
        1 => (prop, class).prop_map(|(s, o)| Triple::new(s, Term::range(), o)),
    ]
}

fn triples(max: usize) -> impl Strategy<Value = Vec<Triple>> {
    prop::collection::vec(triple(), 0..max)
}

fn graph(max: usize) -> impl Strategy<Value = Graph> {
    triples(max).prop_map(|ts| Graph::from_triples(ts).unwrap())
}

fn label() -> impl Strategy<Value = Term> {
    prop::sample::select(vec![
        iri("p0"),
        iri("p1"),
        iri("n0"),
        iri("C0"),
        Term::sub_property_of(),
        Term::rdf_type(),
    ])
}

fn axis() -> impl Strategy<Value = Axis> {
    prop::sample::select(Axis::ALL.to_vec())
}

/// Variable-free expressions over axes, tests and nesting.
fn path() -> impl Strategy<Value = PathExpr> {
    let leaf = prop_oneof![
        axis().prop_map(PathExpr::Axis),
        (axis(), label()).prop_map(|(a, l)| PathExpr::Test(a, l)),
        label().prop_map(PathExpr::Atom),
        Just(PathExpr::Epsilon),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PathExpr::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PathExpr::alt(a, b)),
            inner.clone().prop_map(PathExpr::star),
            inner.clone().prop_map(PathExpr::plus),
            (axis(), inner).prop_map(|(a, e)| PathExpr::nested(a, e)),
        ]
    })
}

fn var_or(t: Term) -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec![Term::var("a"), Term::var("b"), Term::var("c")]),
        Just(t),
    ]
}

/// A triple pattern with a constant predicate.
fn constant_triple_pattern() -> impl Strategy<Value = TriplePattern> {
    let pred = prop::sample::select(vec![
        iri("p0"),
        iri("p1"),
        iri("p2"),
        Term::rdf_type(),
        Term::sub_class_of(),
        Term::sub_property_of(),
        Term::domain(),
        Term::range(),
    ]);
    (var_or(iri("n0")), pred, var_or(iri("C0"))).prop_map(|(s, p, o)| TriplePattern::plain(s, p, o))
}

fn bgp() -> impl Strategy<Value = GraphPattern> {
    prop::collection::vec(constant_triple_pattern(), 1..4).prop_map(GraphPattern::Bgp)
}

fn pattern() -> impl Strategy<Value = GraphPattern> {
    bgp().prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| GraphPattern::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| GraphPattern::union(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| GraphPattern::opt(a, b)),
            inner.prop_map(|p| {
                let k = pathrdf::filter::FilterExpr::Bound("a".into());
                GraphPattern::filter(p, k)
            }),
        ]
    })
}

fn pairs(g: &Graph, e: &PathExpr) -> BTreeSet<(Term, Term)> {
    eval_all_pairs(g, e)
}

fn closure_cfgs() -> Vec<ClosureConfig> {
    let both = ClosureConfig {
        reflexive: true,
        extended: true,
        ..ClosureConfig::default()
    };
    vec![ClosureConfig::rho_df(), ClosureConfig::extended(), both]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // graph model

    #[test]
    fn ntriples_round_trip(ts in triples(30)) {
        let g = Graph::from_triples(ts).unwrap();
        let text = write_ntriples(&g, &Prefixes::default());
        prop_assert_eq!(parse_ntriples(&text).unwrap(), g);
    }

    #[test]
    fn ground_patterns_match_iff_subset(ts in triples(20), probe in triples(4)) {
        let g = Graph::from_triples(ts).unwrap();
        let answers = find_homomorphisms(&g, &BasicGraphPattern::new(probe.clone()));
        let subset = probe.iter().all(|t| g.contains(t));
        prop_assert_eq!(answers == unit(), subset);
        prop_assert!(answers.is_empty() || answers == unit());
    }

    #[test]
    fn matching_is_monotone(a in triples(15), b in triples(15), q in bgp()) {
        let small = Graph::from_triples(a.clone()).unwrap();
        let big = Graph::from_triples(a.into_iter().chain(b)).unwrap();
        let bgp = BasicGraphPattern::new(match q {
            GraphPattern::Bgp(ts) => ts.iter().map(|t| t.as_triple().unwrap()).collect(),
            _ => unreachable!(),
        });
        prop_assert!(find_homomorphisms(&small, &bgp).is_subset(&find_homomorphisms(&big, &bgp)));
    }

    #[test]
    fn adjacency_is_complete(g in graph(40)) {
        for t in g.triples() {
            let expect = [
                (Axis::NEXT, &t.s, &t.p, &t.o),
                (Axis::NEXT_INV, &t.o, &t.p, &t.s),
                (Axis::EDGE, &t.s, &t.o, &t.p),
                (Axis::EDGE_INV, &t.p, &t.o, &t.s),
                (Axis::NODE, &t.p, &t.s, &t.o),
                (Axis::NODE_INV, &t.o, &t.s, &t.p),
            ];
            for (axis, from, label, to) in expect {
                let hits = g.adjacency(from, &AxisStep::labeled(axis, label.clone()));
                prop_assert!(hits.contains(to), "{} missing from {} for {}", axis.name(), from, t);
            }
            prop_assert_eq!(g.adjacency(&t.s, &AxisStep::any(Axis::SELF)), vec![t.s.clone()]);
        }
    }

    // closure

    #[test]
    fn closure_is_extensive_idempotent_and_sound(g in graph(30)) {
        for cfg in closure_cfgs() {
            let c = closure(&g, &cfg).unwrap();
            prop_assert!(g.triples().all(|t| c.contains(&t)));
            prop_assert_eq!(&closure(&c, &cfg).unwrap(), &c);
            prop_assert_eq!(rule_violations(&c, &cfg.rules()), vec![]);
        }
    }

    #[test]
    fn closure_is_monotone(a in triples(15), b in triples(15)) {
        let small = Graph::from_triples(a.clone()).unwrap();
        let big = Graph::from_triples(a.into_iter().chain(b)).unwrap();
        for cfg in closure_cfgs() {
            let (cs, cb) = (closure(&small, &cfg).unwrap(), closure(&big, &cfg).unwrap());
            prop_assert!(cs.triples().all(|t| cb.contains(&t)));
        }
    }

    #[test]
    fn non_reflexive_within_full_closure(g in graph(30), q in bgp()) {
        let full = ClosureConfig { reflexive: true, extended: true, ..ClosureConfig::default() };
        let nrx = non_reflexive_closure(&g, &q.context()).unwrap();
        let all = closure(&g, &full).unwrap();
        prop_assert!(nrx.triples().all(|t| all.contains(&t)));
        prop_assert!(rule_violations(&nrx, &RuleId::RHO_DF).is_empty());
    }

    // path evaluation

    #[test]
    fn star_contains_identity(g in graph(20), e in path()) {
        let star = pairs(&g, &PathExpr::star(e));
        for u in g.voc() {
            prop_assert!(star.contains(&(u.clone(), u.clone())));
        }
    }

    #[test]
    fn plus_is_seq_with_star(g in graph(20), e in path()) {
        prop_assert_eq!(
            pairs(&g, &PathExpr::plus(e.clone())),
            pairs(&g, &PathExpr::seq(e.clone(), PathExpr::star(e)))
        );
    }

    #[test]
    fn alt_and_seq_compose(g in graph(20), a in path(), b in path()) {
        let (pa, pb) = (pairs(&g, &a), pairs(&g, &b));
        let union: BTreeSet<_> = pa.union(&pb).cloned().collect();
        prop_assert_eq!(pairs(&g, &PathExpr::alt(a.clone(), b.clone())), union);
        let composed: BTreeSet<_> = pa
            .iter()
            .flat_map(|(x, w)| pb.iter().filter(move |(v, _)| v == w).map(move |(_, y)| (x.clone(), y.clone())))
            .collect();
        prop_assert_eq!(pairs(&g, &PathExpr::seq(a, b)), composed);
    }

    #[test]
    fn inverse_axes_swap_pairs(g in graph(20), e in path()) {
        for kind in [AxisKind::Next, AxisKind::Edge, AxisKind::Node] {
            let fwd = pairs(&g, &PathExpr::Axis(Axis::new(kind, false)));
            let back = pairs(&g, &PathExpr::Axis(Axis::new(kind, true)));
            let swapped: BTreeSet<_> = back.into_iter().map(|(a, b)| (b, a)).collect();
            prop_assert_eq!(fwd, swapped);
        }
        let swapped: BTreeSet<_> = pairs(&g, &e.inverse()).into_iter().map(|(a, b)| (b, a)).collect();
        prop_assert_eq!(pairs(&g, &e), swapped);
    }

    #[test]
    fn trans_preserves_pairs(g in graph(20), e in path()) {
        prop_assert_eq!(pairs(&g, &e), pairs(&g, &trans(&e)));
    }

    #[test]
    fn printed_paths_reparse(e in path()) {
        let text = e.to_string();
        prop_assert_eq!(parse_path(&text, Dialect::Mixed).unwrap(), e);
    }

    // query algebra

    #[test]
    fn bgps_match_homomorphisms(g in graph(25), q in bgp()) {
        let ctx = q.context();
        prop_assert_eq!(eval_pattern(&g, &q, Dialect::Sparql).unwrap(), find_homomorphisms(&g, &ctx));
    }

    #[test]
    fn join_laws(g in graph(25), a in bgp(), b in bgp(), c in bgp()) {
        let ev = |p: &GraphPattern| eval_pattern(&g, p, Dialect::Sparql).unwrap();
        let (sa, sb, sc) = (ev(&a), ev(&b), ev(&c));
        prop_assert_eq!(join(&sa, &sb), join(&sb, &sa));
        prop_assert_eq!(join(&join(&sa, &sb), &sc), join(&sa, &join(&sb, &sc)));
        prop_assert_eq!(join(&sa, &unit()), sa.clone());
        prop_assert_eq!(ev(&GraphPattern::and(a.clone(), b.clone())), join(&sa, &sb));
        let union = ev(&GraphPattern::union(a.clone(), b.clone()));
        prop_assert!(sa.is_subset(&union) && sb.is_subset(&union));
        let opt = ev(&GraphPattern::opt(a.clone(), b.clone()));
        prop_assert!(join(&sa, &sb).is_subset(&opt));
        prop_assert!(difference(&sa, &sb).is_subset(&opt));
    }

    #[test]
    fn filters_only_remove(g in graph(25), p in pattern()) {
        let k = pathrdf::filter::FilterExpr::Bound("b".into());
        let before = eval_pattern(&g, &p, Dialect::Sparql).unwrap();
        let after = eval_pattern(&g, &GraphPattern::filter(p, k), Dialect::Sparql).unwrap();
        prop_assert!(after.is_subset(&before));
    }

    #[test]
    fn projection_is_idempotent(g in graph(25), p in pattern()) {
        let q = Query::new(Select::All, p);
        let vars = q.projection();
        let once = answer_query(&q, &g, Dialect::Sparql).unwrap();
        let twice: BTreeSet<_> = once.iter().map(|m| m.project(&vars)).collect();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn sparql_is_a_cpsparql_fragment(g in graph(25), p in pattern()) {
        let text = Query::new(Select::All, p.clone()).to_string();
        let q = parse_query_with(&text, Dialect::Cpsparql).unwrap();
        prop_assert_eq!(
            eval_pattern(&g, &q.pattern, Dialect::Cpsparql).unwrap(),
            eval_pattern(&g, &p, Dialect::Sparql).unwrap()
        );
    }

    // rewritings

    #[test]
    fn triple_rewritings_match_closure(g in graph(30), t in constant_triple_pattern()) {
        let closed = non_reflexive_closure(&g, &BasicGraphPattern::new(vec![t.as_triple().unwrap()])).unwrap();
        let expected = eval_pattern(&closed, &GraphPattern::Bgp(vec![t.clone()]), Dialect::Sparql).unwrap();
        let via_phi = phi(&t).unwrap();
        prop_assert_eq!(&eval_pattern(&g, &GraphPattern::Bgp(vec![via_phi]), Dialect::Nsparql).unwrap(), &expected);
        let via_cp = tau_cp(&t, &mut FreshVars::for_pattern(&GraphPattern::Bgp(vec![t.clone()])));
        prop_assert_eq!(&eval_pattern(&g, &GraphPattern::Bgp(vec![via_cp]), Dialect::Cpsparql).unwrap(), &expected);
    }

    #[test]
    fn strategies_agree(g in graph(30), p in pattern()) {
        let q = Query::new(Select::All, p);
        let expected = answer(&q, &g, EntailmentMode::RdfsClosure).unwrap();
        for mode in [EntailmentMode::RdfsPsparql, EntailmentMode::RdfsNsparql, EntailmentMode::RdfsCpsparql] {
            prop_assert_eq!(&answer(&q, &g, mode).unwrap(), &expected, "{}", mode);
        }
    }

    #[test]
    fn rewriting_keeps_the_operator_tree(p in pattern()) {
        let q = Query::new(Select::All, p);
        for mode in RewriteMode::ALL {
            let r = rewrite_query(&q, mode).unwrap();
            let shape = r.pattern.shape();
            let original = q.pattern.shape();
            // τ_ps may expand a BGP into a join with unions of BGPs
            if mode == RewriteMode::PsparqlTau {
                prop_assert_eq!(original.matches("Opt").count(), shape.matches("Opt").count());
                prop_assert_eq!(original.matches("Filter").count(), shape.matches("Filter").count());
            } else {
                prop_assert_eq!(shape, original);
            }
            prop_assert_eq!(r.projection(), q.projection());
            let reparsed = pathrdf::query::parse_query_with(&r.to_string(), mode.target()).unwrap();
            prop_assert_eq!(reparsed.pattern, r.pattern);
        }
    }
}
