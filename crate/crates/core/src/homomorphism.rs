//! Basic graph pattern matching: enumerate the maps σ with σ(P) ⊆ G.

use std::collections::BTreeSet;

use crate::graph::{Graph, TermId};
use crate::query::map::{AnswerSet, Map, Var};
use crate::term::{Term, Triple};

/// A set of triples in which any position may hold a variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BasicGraphPattern {
    pub triples: Vec<Triple>,
}

impl BasicGraphPattern {
    pub fn new(triples: Vec<Triple>) -> Self {
        BasicGraphPattern { triples }
    }

    /// ℬ(P): the variables of the pattern, sorted.
    pub fn variables(&self) -> BTreeSet<Var> {
        self.triples
            .iter()
            .flat_map(|t| [&t.s, &t.p, &t.o])
            .filter_map(|t| match t {
                Term::Variable(v) => Some(v.clone()),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Const(TermId),
    Var(usize),
}

/// All homomorphisms from `bgp` into `g`, each with domain exactly ℬ(bgp).
///
/// Triples are matched most-constrained first (constants and already bound
/// variables), ties broken by input order.
pub fn find_homomorphisms(g: &Graph, bgp: &BasicGraphPattern) -> AnswerSet {
    let vars: Vec<Var> = bgp.variables().into_iter().collect();
    let mut encoded = Vec::with_capacity(bgp.triples.len());
    for t in &bgp.triples {
        let mut slots = [Slot::Var(0); 3];
        for (slot, term) in slots.iter_mut().zip([&t.s, &t.p, &t.o]) {
            *slot = match term {
                Term::Variable(v) => Slot::Var(vars.binary_search(v).unwrap()),
                c => match g.id(c) {
                    Some(id) => Slot::Const(id),
                    None => return AnswerSet::new(),
                },
            };
        }
        encoded.push(slots);
    }
    let order = plan(&encoded, vars.len());
    let mut out = AnswerSet::new();
    let mut binding: Vec<Option<TermId>> = vec![None; vars.len()];
    search(g, &order, 0, &mut binding, &mut |b| {
        out.insert(Map::from_pairs(
            vars.iter()
                .zip(b)
                .map(|(v, id)| (v, g.term(id.unwrap()).clone())),
        ));
    });
    out
}

fn plan(triples: &[[Slot; 3]], nvars: usize) -> Vec<[Slot; 3]> {
    let mut bound = vec![false; nvars];
    let mut left: Vec<usize> = (0..triples.len()).collect();
    let mut order = Vec::with_capacity(triples.len());
    while !left.is_empty() {
        let score = |i: usize| {
            triples[i]
                .iter()
                .filter(|s| match s {
                    Slot::Const(_) => true,
                    Slot::Var(v) => bound[*v],
                })
                .count()
        };
        // max score, earliest index on ties
        let (pos, _) = left
            .iter()
            .enumerate()
            .max_by(|(ia, &a), (ib, &b)| score(a).cmp(&score(b)).then(ib.cmp(ia)))
            .unwrap();
        let i = left.remove(pos);
        for s in &triples[i] {
            if let Slot::Var(v) = s {
                bound[*v] = true;
            }
        }
        order.push(triples[i]);
    }
    order
}

fn search(
    g: &Graph,
    order: &[[Slot; 3]],
    depth: usize,
    binding: &mut Vec<Option<TermId>>,
    emit: &mut dyn FnMut(&[Option<TermId>]),
) {
    let Some(t) = order.get(depth) else {
        emit(binding);
        return;
    };
    let resolve = |s: Slot, b: &[Option<TermId>]| match s {
        Slot::Const(c) => Some(c),
        Slot::Var(v) => b[v],
    };
    let [s, p, o] = [resolve(t[0], binding), resolve(t[1], binding), resolve(t[2], binding)];
    let candidates: Vec<[TermId; 3]> = g.matching(s, p, o).collect();
    for cand in candidates {
        let mut newly = Vec::new();
        let mut ok = true;
        for (slot, value) in t.iter().zip(cand) {
            if let Slot::Var(v) = *slot {
                match binding[v] {
                    Some(x) if x != value => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        binding[v] = Some(value);
                        newly.push(v);
                    }
                }
            }
        }
        if ok {
            search(g, order, depth + 1, binding, emit);
        }
        for v in newly {
            binding[v] = None;
        }
    }
}
