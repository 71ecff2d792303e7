//! Immutable triple store with per-term adjacency lists for the seven axes.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{Term, Triple};

/// Dense identifier of a term inside one [`Graph`]. Ids follow term order.
pub type TermId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxisKind {
    SelfAxis,
    Next,
    Edge,
    Node,
}

/// Navigation axis. `self` has no inverse: constructing it inverted yields `self`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axis {
    pub kind: AxisKind,
    pub inverted: bool,
}

impl Axis {
    pub const SELF: Axis = Axis { kind: AxisKind::SelfAxis, inverted: false };
    pub const NEXT: Axis = Axis { kind: AxisKind::Next, inverted: false };
    pub const NEXT_INV: Axis = Axis { kind: AxisKind::Next, inverted: true };
    pub const EDGE: Axis = Axis { kind: AxisKind::Edge, inverted: false };
    pub const EDGE_INV: Axis = Axis { kind: AxisKind::Edge, inverted: true };
    pub const NODE: Axis = Axis { kind: AxisKind::Node, inverted: false };
    pub const NODE_INV: Axis = Axis { kind: AxisKind::Node, inverted: true };

    pub const ALL: [Axis; 7] = [
        Axis::SELF,
        Axis::NEXT,
        Axis::NEXT_INV,
        Axis::EDGE,
        Axis::EDGE_INV,
        Axis::NODE,
        Axis::NODE_INV,
    ];

    pub fn new(kind: AxisKind, inverted: bool) -> Self {
        Axis {
            kind,
            inverted: inverted && kind != AxisKind::SelfAxis,
        }
    }

    pub fn inverse(self) -> Self {
        Axis::new(self.kind, !self.inverted)
    }

    pub fn name(self) -> &'static str {
        match self.kind {
            AxisKind::SelfAxis => "self",
            AxisKind::Next => "next",
            AxisKind::Edge => "edge",
            AxisKind::Node => "node",
        }
    }

    /// Slot in the adjacency table, `None` for `self`.
    pub(crate) fn slot(self) -> Option<usize> {
        let base = match self.kind {
            AxisKind::SelfAxis => return None,
            AxisKind::Next => 0,
            AxisKind::Edge => 2,
            AxisKind::Node => 4,
        };
        Some(base + usize::from(self.inverted))
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if self.inverted {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// An axis with an optional label test, i.e. `axis` or `axis::label`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxisStep {
    pub axis: Axis,
    pub label: Option<Term>,
}

impl AxisStep {
    pub fn any(axis: Axis) -> Self {
        AxisStep { axis, label: None }
    }

    pub fn labeled(axis: Axis, label: Term) -> Self {
        AxisStep {
            axis,
            label: Some(label),
        }
    }
}

/// Compressed adjacency for one axis: `entries[offsets[u]..offsets[u + 1]]`
/// holds `(label, target)` pairs of term `u`, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Csr {
    offsets: Vec<u32>,
    entries: Vec<(TermId, TermId)>,
}

impl Csr {
    fn build(n: usize, mut items: Vec<(TermId, TermId, TermId)>) -> Self {
        items.sort_unstable();
        let mut offsets = vec![0u32; n + 1];
        for &(u, _, _) in &items {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let entries = items.into_iter().map(|(_, l, t)| (l, t)).collect();
        Csr { offsets, entries }
    }

    fn row(&self, u: TermId) -> &[(TermId, TermId)] {
        let u = u as usize;
        if u + 1 >= self.offsets.len() {
            return &[];
        }
        &self.entries[self.offsets[u] as usize..self.offsets[u + 1] as usize]
    }
}

/// A ground RDF graph. Built once, then read-only.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    triples: Vec<[TermId; 3]>,
    adj: [Csr; 6],
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Builds a graph from ground triples, dropping duplicates. Predicates
    /// must be IRIs; subjects may be IRIs or (for closure output) literals.
    pub fn from_triples<I: IntoIterator<Item = Triple>>(triples: I) -> Result<Self> {
        let triples: Vec<Triple> = triples.into_iter().collect();
        for t in &triples {
            if !t.is_ground() {
                return Err(Error::InvalidGraph(format!("variable in stored triple {t}")));
            }
            if !t.p.is_iri() {
                return Err(Error::InvalidGraph(format!("non-IRI predicate in {t}")));
            }
        }
        let mut terms: Vec<Term> = triples
            .iter()
            .flat_map(|t| [t.s.clone(), t.p.clone(), t.o.clone()])
            .collect();
        terms.sort_unstable();
        terms.dedup();
        let ids: HashMap<Term, TermId> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as TermId))
            .collect();
        let mut encoded: Vec<[TermId; 3]> = triples
            .iter()
            .map(|t| [ids[&t.s], ids[&t.p], ids[&t.o]])
            .collect();
        encoded.sort_unstable();
        encoded.dedup();

        let n = terms.len();
        let mut lists: [Vec<(TermId, TermId, TermId)>; 6] = Default::default();
        for &[s, p, o] in &encoded {
            lists[0].push((s, p, o)); // next
            lists[1].push((o, p, s)); // next^-1
            lists[2].push((s, o, p)); // edge
            lists[3].push((p, o, s)); // edge^-1
            lists[4].push((p, s, o)); // node
            lists[5].push((o, s, p)); // node^-1
        }
        let adj = lists.map(|l| Csr::build(n, l));
        Ok(Graph {
            terms,
            ids,
            triples: encoded,
            adj,
        })
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in ascending term order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.triples.iter().map(|&[s, p, o]| {
            Triple::new(
                self.term(s).clone(),
                self.term(p).clone(),
                self.term(o).clone(),
            )
        })
    }

    pub fn contains(&self, t: &Triple) -> bool {
        match (self.id(&t.s), self.id(&t.p), self.id(&t.o)) {
            (Some(s), Some(p), Some(o)) => self.contains_ids(s, p, o),
            _ => false,
        }
    }

    pub(crate) fn contains_ids(&self, s: TermId, p: TermId, o: TermId) -> bool {
        self.triples.binary_search(&[s, p, o]).is_ok()
    }

    /// voc(G): every term occurring in some triple, in ascending order.
    pub fn voc(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn voc_len(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    pub fn id(&self, t: &Term) -> Option<TermId> {
        self.ids.get(t).copied()
    }

    /// `(label, target)` pairs reachable from `u` along a non-self axis.
    pub(crate) fn row(&self, u: TermId, axis: Axis) -> &[(TermId, TermId)] {
        match axis.slot() {
            Some(slot) => self.adj[slot].row(u),
            None => &[],
        }
    }

    /// The part of [`Graph::row`] whose label is `label`.
    pub(crate) fn row_labeled(&self, u: TermId, axis: Axis, label: TermId) -> &[(TermId, TermId)] {
        let row = self.row(u, axis);
        let lo = row.partition_point(|&(l, _)| l < label);
        let hi = row.partition_point(|&(l, _)| l <= label);
        &row[lo..hi]
    }

    /// Triples matching a pattern where `None` is a wildcard.
    pub(crate) fn matching(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Box<dyn Iterator<Item = [TermId; 3]> + '_> {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                Box::new(self.contains_ids(s, p, o).then_some([s, p, o]).into_iter())
            }
            (Some(s), Some(p), None) => {
                Box::new(self.row_labeled(s, Axis::NEXT, p).iter().map(move |&(p, o)| [s, p, o]))
            }
            (Some(s), None, o) => Box::new(
                self.row(s, Axis::NEXT)
                    .iter()
                    .filter(move |&&(_, x)| o.is_none_or(|o| o == x))
                    .map(move |&(p, o)| [s, p, o]),
            ),
            (None, Some(p), Some(o)) => {
                Box::new(self.row_labeled(o, Axis::NEXT_INV, p).iter().map(move |&(p, s)| [s, p, o]))
            }
            (None, None, Some(o)) => {
                Box::new(self.row(o, Axis::NEXT_INV).iter().map(move |&(p, s)| [s, p, o]))
            }
            (None, Some(p), None) => {
                Box::new(self.row(p, Axis::NODE).iter().map(move |&(s, o)| [s, p, o]))
            }
            (None, None, None) => Box::new(self.triples.iter().copied()),
        }
    }

    /// Terms used in predicate position.
    pub fn predicates(&self) -> Vec<Term> {
        self.predicate_ids().map(|p| self.term(p).clone()).collect()
    }

    pub(crate) fn predicate_ids(&self) -> impl Iterator<Item = TermId> + '_ {
        (0..self.terms.len() as TermId).filter(|&p| !self.row(p, Axis::NODE).is_empty())
    }

    /// Terms that occur as labels of `axis` steps somewhere in the graph.
    pub(crate) fn labels_of(&self, axis: Axis) -> Vec<TermId> {
        let n = self.terms.len() as TermId;
        match axis.kind {
            AxisKind::SelfAxis => (0..n).collect(),
            // next labels are predicates, edge labels objects, node labels subjects
            AxisKind::Next => (0..n).filter(|&u| !self.row(u, Axis::NODE).is_empty()).collect(),
            AxisKind::Edge => (0..n).filter(|&u| !self.row(u, Axis::NEXT_INV).is_empty()).collect(),
            AxisKind::Node => (0..n).filter(|&u| !self.row(u, Axis::NEXT).is_empty()).collect(),
        }
    }

    /// All `v` with `⟨step, v⟩ ∈ α(u)`, in term order.
    pub fn adjacency(&self, u: &Term, step: &AxisStep) -> Vec<Term> {
        let Some(uid) = self.id(u) else {
            return Vec::new();
        };
        if step.axis.kind == AxisKind::SelfAxis {
            return match &step.label {
                Some(l) if l != u => Vec::new(),
                _ => vec![u.clone()],
            };
        }
        let row = match &step.label {
            None => self.row(uid, step.axis),
            Some(l) => match self.id(l) {
                Some(lid) => self.row_labeled(uid, step.axis, lid),
                None => &[],
            },
        };
        let mut out: Vec<TermId> = row.iter().map(|&(_, v)| v).collect();
        out.sort_unstable();
        out.dedup();
        out.into_iter().map(|v| self.term(v).clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s), Term::iri(p), Term::iri(o))
    }

    #[test]
    fn axes_follow_triple_positions() {
        let g = Graph::from_triples([t("a", "p", "b")]).unwrap();
        let a = Term::iri("a");
        let p = Term::iri("p");
        let b = Term::iri("b");
        let adj = |u: &Term, axis| g.adjacency(u, &AxisStep::any(axis));
        assert_eq!(adj(&a, Axis::NEXT), vec![b.clone()]);
        assert_eq!(adj(&b, Axis::NEXT_INV), vec![a.clone()]);
        assert_eq!(adj(&a, Axis::EDGE), vec![p.clone()]);
        assert_eq!(adj(&p, Axis::EDGE_INV), vec![a.clone()]);
        assert_eq!(adj(&p, Axis::NODE), vec![b.clone()]);
        assert_eq!(adj(&b, Axis::NODE_INV), vec![p.clone()]);
        assert_eq!(adj(&p, Axis::SELF), vec![p.clone()]);
        assert!(adj(&Term::iri("zzz"), Axis::SELF).is_empty());
        // labels: next carries p, edge carries b, node carries a
        assert_eq!(g.adjacency(&a, &AxisStep::labeled(Axis::EDGE, b.clone())), vec![p.clone()]);
        assert!(g.adjacency(&a, &AxisStep::labeled(Axis::EDGE, a.clone())).is_empty());
        assert_eq!(g.adjacency(&p, &AxisStep::labeled(Axis::NODE, a.clone())), vec![b]);
    }

    #[test]
    fn duplicates_collapse() {
        let g = Graph::from_triples([t("a", "p", "b"), t("a", "p", "b")]).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.voc().len(), 3);
    }

    #[test]
    fn rejects_variables_and_literal_predicates() {
        let v = Triple::new(Term::var("x"), Term::iri("p"), Term::iri("b"));
        assert!(Graph::from_triples([v]).is_err());
        let l = Triple::new(Term::iri("a"), Term::literal("p"), Term::iri("b"));
        assert!(Graph::from_triples([l]).is_err());
    }

    #[test]
    fn self_inverse_normalizes() {
        assert_eq!(Axis::new(AxisKind::SelfAxis, true), Axis::SELF);
        assert_eq!(Axis::NEXT.inverse(), Axis::NEXT_INV);
    }
}
