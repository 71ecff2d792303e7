//! Path evaluation by reachability in the product of the graph with the
//! expression's ε-NFA. Constraint label sets are computed once per
//! constraint and cached for the lifetime of an [`Evaluator`].

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::filter::{eval_filter, FilterExpr};
use crate::graph::{Axis, AxisKind, Graph, TermId};
use crate::path::ast::{trans, Constraint, PathExpr};
use crate::path::nfa::{build_nfa, Nfa};
use crate::query::map::{AnswerSet, Map, Var};
use crate::query::pattern::{Predicate, TriplePattern};
use crate::term::Term;

#[derive(Debug, Clone)]
enum LabelFilter {
    Any,
    Is(TermId),
    NotIs(TermId),
    Set(Rc<Vec<bool>>),
    Never,
}

impl LabelFilter {
    fn admits(&self, l: TermId) -> bool {
        match self {
            LabelFilter::Any => true,
            LabelFilter::Is(x) => *x == l,
            LabelFilter::NotIs(x) => *x != l,
            LabelFilter::Set(s) => s[l as usize],
            LabelFilter::Never => false,
        }
    }
}

#[derive(Debug, Clone)]
struct Step {
    axis: Axis,
    filter: LabelFilter,
}

struct Compiled {
    fwd: Nfa,
    bwd: Nfa,
    steps: Vec<Step>,
    inv_steps: Vec<Step>,
}

/// Visited marks for product states, reset in O(1) by bumping a generation.
struct Stamps {
    marks: Vec<u32>,
    gen: u32,
    width: usize,
}

impl Stamps {
    fn new(nodes: usize, states: usize) -> Self {
        Stamps {
            marks: vec![0; nodes * states],
            gen: 0,
            width: states,
        }
    }

    fn reset(&mut self) {
        self.gen += 1;
        if self.gen == u32::MAX {
            self.marks.fill(0);
            self.gen = 1;
        }
    }

    fn mark(&mut self, u: TermId, q: usize) -> bool {
        let i = u as usize * self.width + q;
        if self.marks[i] == self.gen {
            false
        } else {
            self.marks[i] = self.gen;
            true
        }
    }
}

/// Evaluates path expressions and patterns over one graph, memoizing
/// compiled expressions, constraint label sets and triple answers.
pub struct Evaluator<'g> {
    pub(crate) g: &'g Graph,
    compiled: RefCell<HashMap<PathExpr, Rc<Compiled>>>,
    labels: RefCell<HashMap<Constraint, Rc<Vec<bool>>>>,
    pub(crate) triples: RefCell<HashMap<TriplePattern, Rc<AnswerSet>>>,
}

impl<'g> Evaluator<'g> {
    pub fn new(g: &'g Graph) -> Self {
        Evaluator {
            g,
            compiled: RefCell::new(HashMap::new()),
            labels: RefCell::new(HashMap::new()),
            triples: RefCell::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    fn compile(&self, e: &PathExpr) -> Rc<Compiled> {
        if let Some(c) = self.compiled.borrow().get(e) {
            return c.clone();
        }
        let fwd = build_nfa(e);
        let steps: Vec<Step> = fwd.symbols.iter().map(|s| self.step_of(s)).collect();
        let inv_steps = steps
            .iter()
            .map(|s| Step {
                axis: s.axis.inverse(),
                filter: s.filter.clone(),
            })
            .collect();
        let compiled = Rc::new(Compiled {
            bwd: fwd.reversed(),
            fwd,
            steps,
            inv_steps,
        });
        self.compiled.borrow_mut().insert(e.clone(), compiled.clone());
        compiled
    }

    fn step_of(&self, leaf: &PathExpr) -> Step {
        let is = |t: &Term| self.g.id(t).map_or(LabelFilter::Never, LabelFilter::Is);
        match leaf {
            PathExpr::Axis(a) => Step {
                axis: *a,
                filter: LabelFilter::Any,
            },
            PathExpr::Test(a, l) => Step { axis: *a, filter: is(l) },
            PathExpr::Atom(l) => Step {
                axis: Axis::NEXT,
                filter: is(l),
            },
            PathExpr::NegAtom(l) => Step {
                axis: Axis::NEXT,
                filter: self.g.id(l).map_or(LabelFilter::Any, LabelFilter::NotIs),
            },
            PathExpr::Nested(..) => self.step_of(&trans(leaf)),
            PathExpr::Constrained(a, c) => {
                debug_assert!(!c.exported, "open constraints are substituted before compiling");
                Step {
                    axis: *a,
                    filter: LabelFilter::Set(self.constraint_labels(c)),
                }
            }
            other => unreachable!("{other} is not a closed leaf symbol"),
        }
    }

    /// Calls `f` with every v such that u --step--> v.
    fn for_each_target(&self, u: TermId, step: &Step, mut f: impl FnMut(TermId)) {
        if step.axis.kind == AxisKind::SelfAxis {
            if step.filter.admits(u) {
                f(u);
            }
            return;
        }
        match &step.filter {
            LabelFilter::Never => {}
            LabelFilter::Is(l) => self.g.row_labeled(u, step.axis, *l).iter().for_each(|&(_, v)| f(v)),
            LabelFilter::Any => self.g.row(u, step.axis).iter().for_each(|&(_, v)| f(v)),
            filter => {
                for &(l, v) in self.g.row(u, step.axis) {
                    if filter.admits(l) {
                        f(v);
                    }
                }
            }
        }
    }

    /// Product-automaton search from `sources`. Returns nodes reached in an
    /// accepting state; stops early once `stop` is reached.
    fn reach(
        &self,
        c: &Compiled,
        backward: bool,
        sources: &[TermId],
        stop: Option<TermId>,
        stamps: &mut Stamps,
    ) -> Vec<TermId> {
        let (nfa, steps) = if backward { (&c.bwd, &c.inv_steps) } else { (&c.fwd, &c.steps) };
        stamps.reset();
        let mut stack = Vec::new();
        for &u in sources {
            for &q in nfa.closure(nfa.start) {
                if stamps.mark(u, q) {
                    stack.push((u, q));
                }
            }
        }
        let mut out = Vec::new();
        while let Some((u, q)) = stack.pop() {
            if q == nfa.fin {
                out.push(u);
                if stop == Some(u) {
                    return out;
                }
            }
            for &(sym, r) in &nfa.trans[q] {
                self.for_each_target(u, &steps[sym], |v| {
                    for &q2 in nfa.closure(r) {
                        if stamps.mark(v, q2) {
                            stack.push((v, q2));
                        }
                    }
                });
            }
        }
        out
    }

    fn stamps(&self, c: &Compiled) -> Stamps {
        Stamps::new(self.g.voc_len(), c.fwd.num_states())
    }

    /// Whether ⟨a, b⟩ is in [[e]] for a closed expression.
    fn pair_ids(&self, e: &PathExpr, a: TermId, b: TermId) -> bool {
        let c = self.compile(e);
        let mut st = self.stamps(&c);
        self.reach(&c, false, &[a], Some(b), &mut st).contains(&b)
    }

    fn forward_ids(&self, e: &PathExpr, a: TermId) -> Vec<TermId> {
        let c = self.compile(e);
        let mut st = self.stamps(&c);
        self.reach(&c, false, &[a], None, &mut st)
    }

    fn backward_ids(&self, e: &PathExpr, b: TermId) -> Vec<TermId> {
        let c = self.compile(e);
        let mut st = self.stamps(&c);
        self.reach(&c, true, &[b], None, &mut st)
    }

    /// Nodes that start at least one `e` path: the LABEL marking.
    fn source_ids(&self, e: &PathExpr) -> Vec<TermId> {
        let c = self.compile(e);
        let mut st = self.stamps(&c);
        let all: Vec<TermId> = (0..self.g.voc_len() as TermId).collect();
        self.reach(&c, true, &all, None, &mut st)
    }

    fn all_pair_ids(&self, e: &PathExpr) -> Vec<(TermId, TermId)> {
        let c = self.compile(e);
        let mut st = self.stamps(&c);
        let mut out = Vec::new();
        for u in 0..self.g.voc_len() as TermId {
            for v in self.reach(&c, false, &[u], None, &mut st) {
                out.push((u, v));
            }
        }
        out
    }

    /// Labels z whose substitution for the head satisfies the constraint.
    pub(crate) fn constraint_labels(&self, c: &Constraint) -> Rc<Vec<bool>> {
        if let Some(s) = self.labels.borrow().get(c) {
            return s.clone();
        }
        let set = Rc::new(self.compute_labels(c));
        self.labels.borrow_mut().insert(c.clone(), set.clone());
        set
    }

    fn compute_labels(&self, c: &Constraint) -> Vec<bool> {
        let n = self.g.voc_len();
        let mut set = vec![false; n];
        let head = c.head_term();
        let filter_ok = |m: &Map| c.filter.as_ref().is_none_or(|k| eval_filter(m, k));
        let with_head = |z: TermId| {
            let mut m = Map::new();
            m.insert(c.head.clone(), Some(self.g.term(z).clone()));
            m
        };
        if c.body.is_empty() {
            for z in 0..n as TermId {
                set[z as usize] = filter_ok(&with_head(z));
            }
            return set;
        }
        if let [t] = c.body.as_slice() {
            let filter_on_head_only = c
                .filter
                .as_ref()
                .is_none_or(|k| k.variables().iter().all(|v| *v == c.head));
            let path = match &t.p {
                Predicate::Path(e) if e.is_closed() => Some(e.clone()),
                Predicate::Term(p @ Term::Iri(_)) => Some(PathExpr::next(p.clone())),
                _ => None,
            };
            if let (Some(path), true, true, true) = (path, t.s == head, t.o != head, filter_on_head_only) {
                let cands = match &t.o {
                    Term::Variable(_) => self.source_ids(&path),
                    o => self.g.id(o).map(|b| self.backward_ids(&path, b)).unwrap_or_default(),
                };
                for z in cands {
                    set[z as usize] = filter_ok(&with_head(z));
                }
                return set;
            }
        }
        for sigma in self.eval_bgp(&c.body) {
            match sigma.value(&c.head) {
                Some(t) => {
                    if let Some(z) = self.g.id(t) {
                        if !set[z as usize] && filter_ok(&sigma) {
                            set[z as usize] = true;
                        }
                    }
                }
                None => {
                    for z in 0..n as TermId {
                        if !set[z as usize] {
                            let mut m = sigma.clone();
                            m.insert(c.head.clone(), Some(self.g.term(z).clone()));
                            set[z as usize] = filter_ok(&m);
                        }
                    }
                }
            }
        }
        set
    }

    /// Candidate values of an exported variable: labels seen on the axes
    /// where it occurs.
    fn candidates(&self, e: &PathExpr, x: &str) -> BTreeSet<TermId> {
        let mut out = BTreeSet::new();
        e.walk_leaves(&mut |leaf| {
            let axis = match leaf {
                PathExpr::VarAtom(v) if &**v == x => Axis::NEXT,
                PathExpr::Constrained(a, c) if c.exported && &*c.head == x => *a,
                _ => return,
            };
            if axis.kind == AxisKind::SelfAxis {
                out.extend(0..self.g.voc_len() as TermId);
            } else {
                out.extend(self.g.labels_of(axis));
            }
        });
        out
    }

    /// Answers to ⟨s, e, o⟩: bindings for the variables among s and o plus
    /// the exported variables of e.
    pub fn eval_path_triple(&self, s: &Term, e: &PathExpr, o: &Term) -> AnswerSet {
        if let Some(x) = e.exported_vars().into_iter().next() {
            let mut out = AnswerSet::new();
            for b in self.candidates(e, &x) {
                let value = self.g.term(b).clone();
                let bind = |t: &Term| match t {
                    Term::Variable(v) if *v == x => value.clone(),
                    t => t.clone(),
                };
                let e2 = e.substitute(&x, &value);
                for mut m in self.eval_path_triple(&bind(s), &e2, &bind(o)) {
                    m.insert(x.clone(), Some(value.clone()));
                    out.insert(m);
                }
            }
            return out;
        }
        let term = |id: TermId| Some(self.g.term(id).clone());
        let single = |v: &Var, id: TermId| {
            let mut m = Map::new();
            m.insert(v.clone(), term(id));
            m
        };
        match (s, o) {
            (Term::Variable(x), Term::Variable(y)) => self
                .all_pair_ids(e)
                .into_iter()
                .filter(|(u, v)| x != y || u == v)
                .map(|(u, v)| {
                    let mut m = single(x, u);
                    m.insert(y.clone(), term(v));
                    m
                })
                .collect(),
            (Term::Variable(x), o) => match self.g.id(o) {
                Some(b) => self.backward_ids(e, b).into_iter().map(|u| single(x, u)).collect(),
                None => AnswerSet::new(),
            },
            (s, Term::Variable(y)) => match self.g.id(s) {
                Some(a) => self.forward_ids(e, a).into_iter().map(|v| single(y, v)).collect(),
                None => AnswerSet::new(),
            },
            (s, o) => match (self.g.id(s), self.g.id(o)) {
                (Some(a), Some(b)) if self.pair_ids(e, a, b) => AnswerSet::from([Map::new()]),
                _ => AnswerSet::new(),
            },
        }
    }

    pub fn eval_pair(&self, e: &PathExpr, a: &Term, b: &Term) -> bool {
        if e.is_closed() {
            return match (self.g.id(a), self.g.id(b)) {
                (Some(a), Some(b)) => self.pair_ids(e, a, b),
                _ => false,
            };
        }
        !self.eval_path_triple(a, e, b).is_empty()
    }

    pub fn eval_all_pairs(&self, e: &PathExpr) -> BTreeSet<(Term, Term)> {
        if e.is_closed() {
            return self
                .all_pair_ids(e)
                .into_iter()
                .map(|(u, v)| (self.g.term(u).clone(), self.g.term(v).clone()))
                .collect();
        }
        // '#' cannot occur in parsed variable names
        let (s, o) = (Var::from("#s"), Var::from("#o"));
        self.eval_path_triple(&Term::Variable(s.clone()), e, &Term::Variable(o.clone()))
            .into_iter()
            .filter_map(|m| Some((m.value(&s)?.clone(), m.value(&o)?.clone())))
            .collect()
    }

    /// Nodes from which some `e` path starts.
    pub fn label(&self, e: &PathExpr) -> BTreeSet<Term> {
        if !e.is_closed() {
            return self.eval_all_pairs(e).into_iter().map(|(u, _)| u).collect();
        }
        self.source_ids(e).into_iter().map(|u| self.g.term(u).clone()).collect()
    }

    pub fn constraint_sat(&self, candidate: &Term, c: &Constraint) -> bool {
        let closed;
        let c = if c.exported {
            closed = Constraint {
                exported: false,
                ..c.clone()
            };
            &closed
        } else {
            c
        };
        match self.g.id(candidate) {
            Some(z) => self.constraint_labels(c)[z as usize],
            // off-graph candidates can only satisfy a body-free constraint
            None => {
                c.body.is_empty() && {
                    let mut m = Map::new();
                    m.insert(c.head.clone(), Some(candidate.clone()));
                    c.filter.as_ref().is_none_or(|k: &FilterExpr| eval_filter(&m, k))
                }
            }
        }
    }
}

/// Whether ⟨a, b⟩ ∈ [[e]]. Exported variables are quantified existentially.
pub fn eval_pair(g: &Graph, e: &PathExpr, a: &Term, b: &Term) -> bool {
    Evaluator::new(g).eval_pair(e, a, b)
}

/// The pair projection of [[e]].
pub fn eval_all_pairs(g: &Graph, e: &PathExpr) -> BTreeSet<(Term, Term)> {
    Evaluator::new(g).eval_all_pairs(e)
}

/// Nodes u with ⟨u, v⟩ ∈ [[e]] for some v.
pub fn label(g: &Graph, e: &PathExpr) -> BTreeSet<Term> {
    Evaluator::new(g).label(e)
}

/// Whether `candidate` satisfies the constraint `c` in `g`.
pub fn constraint_sat(g: &Graph, candidate: &Term, c: &Constraint) -> bool {
    Evaluator::new(g).constraint_sat(candidate, c)
}
