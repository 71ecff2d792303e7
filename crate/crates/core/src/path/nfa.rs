use std::collections::BTreeMap;

use crate::path::ast::PathExpr;

pub type StateId = usize;

/// Thompson ε-NFA whose letters are the leaf symbols T(R) of an expression.
/// There is exactly one final state.
#[derive(Debug, Clone)]
pub struct Nfa {
    /// The alphabet; transitions refer to symbols by index.
    pub symbols: Vec<PathExpr>,
    pub start: StateId,
    pub fin: StateId,
    pub eps: Vec<Vec<StateId>>,
    /// `(symbol, target)` pairs per state.
    pub trans: Vec<Vec<(usize, StateId)>>,
    /// ε-closure of every state, itself included.
    closure: Vec<Vec<StateId>>,
}

struct Builder {
    symbols: BTreeMap<PathExpr, usize>,
    eps: Vec<Vec<StateId>>,
    trans: Vec<Vec<(usize, StateId)>>,
}

impl Builder {
    fn state(&mut self) -> StateId {
        self.eps.push(Vec::new());
        self.trans.push(Vec::new());
        self.eps.len() - 1
    }

    fn fragment(&mut self, e: &PathExpr) -> (StateId, StateId) {
        match e {
            PathExpr::Epsilon => {
                let (s, f) = (self.state(), self.state());
                self.eps[s].push(f);
                (s, f)
            }
            PathExpr::Seq(a, b) => {
                let (s1, f1) = self.fragment(a);
                let (s2, f2) = self.fragment(b);
                self.eps[f1].push(s2);
                (s1, f2)
            }
            PathExpr::Alt(a, b) => {
                let (s, f) = (self.state(), self.state());
                for part in [a, b] {
                    let (ps, pf) = self.fragment(part);
                    self.eps[s].push(ps);
                    self.eps[pf].push(f);
                }
                (s, f)
            }
            PathExpr::Star(a) => {
                let (s, f) = (self.state(), self.state());
                let (is, ifin) = self.fragment(a);
                self.eps[s].extend([is, f]);
                self.eps[ifin].extend([is, f]);
                (s, f)
            }
            // R+ = R/R*
            PathExpr::Plus(a) => self.fragment(&PathExpr::seq((**a).clone(), PathExpr::star((**a).clone()))),
            leaf => {
                let next = self.symbols.len();
                let sym = *self.symbols.entry(leaf.clone()).or_insert(next);
                let (s, f) = (self.state(), self.state());
                self.trans[s].push((sym, f));
                (s, f)
            }
        }
    }
}

/// Compiles `e` into an ε-NFA over its leaf symbols.
pub fn build_nfa(e: &PathExpr) -> Nfa {
    let mut b = Builder {
        symbols: BTreeMap::new(),
        eps: Vec::new(),
        trans: Vec::new(),
    };
    let (start, fin) = b.fragment(e);
    let mut symbols = vec![PathExpr::Epsilon; b.symbols.len()];
    for (sym, i) in b.symbols {
        symbols[i] = sym;
    }
    Nfa::assemble(symbols, start, fin, b.eps, b.trans)
}

impl Nfa {
    fn assemble(
        symbols: Vec<PathExpr>,
        start: StateId,
        fin: StateId,
        eps: Vec<Vec<StateId>>,
        trans: Vec<Vec<(usize, StateId)>>,
    ) -> Self {
        let n = eps.len();
        let mut closure = Vec::with_capacity(n);
        let mut seen = vec![usize::MAX; n];
        for q in 0..n {
            let mut out = vec![q];
            seen[q] = q;
            let mut i = 0;
            while i < out.len() {
                for &r in &eps[out[i]] {
                    if seen[r] != q {
                        seen[r] = q;
                        out.push(r);
                    }
                }
                i += 1;
            }
            closure.push(out);
        }
        Nfa {
            symbols,
            start,
            fin,
            eps,
            trans,
            closure,
        }
    }

    pub fn num_states(&self) -> usize {
        self.eps.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    pub fn closure(&self, q: StateId) -> &[StateId] {
        &self.closure[q]
    }

    /// Same language, read right to left.
    pub fn reversed(&self) -> Nfa {
        let n = self.num_states();
        let mut eps = vec![Vec::new(); n];
        let mut trans = vec![Vec::new(); n];
        for q in 0..n {
            for &r in &self.eps[q] {
                eps[r].push(q);
            }
            for &(sym, r) in &self.trans[q] {
                trans[r].push((sym, q));
            }
        }
        Nfa::assemble(self.symbols.clone(), self.fin, self.start, eps, trans)
    }

    /// Membership of a word of leaf symbols.
    pub fn accepts(&self, word: &[PathExpr]) -> bool {
        let mut current: Vec<StateId> = self.closure(self.start).to_vec();
        for letter in word {
            let Some(sym) = self.symbols.iter().position(|s| s == letter) else {
                return false;
            };
            let mut next: Vec<StateId> = Vec::new();
            for &q in &current {
                for &(s, r) in &self.trans[q] {
                    if s == sym {
                        next.extend_from_slice(self.closure(r));
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            current = next;
        }
        current.contains(&self.fin)
    }

    pub fn is_nullable(&self) -> bool {
        self.closure(self.start).contains(&self.fin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn next(l: &str) -> PathExpr {
        PathExpr::next(Term::iri(l))
    }

    #[test]
    fn single_step() {
        let nfa = build_nfa(&next("a"));
        assert_eq!(nfa.num_states(), 2);
        assert_eq!(nfa.num_transitions(), 1);
        assert!(nfa.accepts(&[next("a")]));
        assert!(!nfa.accepts(&[]));
    }

    #[test]
    fn star_is_nullable() {
        let nfa = build_nfa(&PathExpr::star(next("a")));
        assert!(nfa.is_nullable());
        assert!(nfa.accepts(&[next("a"), next("a"), next("a")]));
    }

    #[test]
    fn plus_rejects_the_empty_word() {
        let nfa = build_nfa(&PathExpr::plus(next("sc")));
        assert!(!nfa.accepts(&[]));
        for n in 1..6 {
            assert!(nfa.accepts(&vec![next("sc"); n]));
        }
        assert!(!nfa.accepts(&[next("sc"), next("sp")]));
        assert_eq!(nfa.symbols, vec![next("sc")]);
    }

    #[test]
    fn reversal() {
        let e = PathExpr::seq(next("a"), PathExpr::star(next("b")));
        let rev = build_nfa(&e).reversed();
        assert!(rev.accepts(&[next("b"), next("b"), next("a")]));
        assert!(!rev.accepts(&[next("a"), next("b")]));
    }
}
