//! Partial variable assignments and the set operations over them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::term::Term;

/// Variable name without the leading `?`.
pub type Var = Arc<str>;

/// A map σ from variables to terms. `None` is the null value introduced by
/// completion; it compares like any other value.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Map(BTreeMap<Var, Option<Term>>);

pub type AnswerSet = BTreeSet<Map>;

impl Map {
    pub fn new() -> Self {
        Map::default()
    }

    pub fn from_pairs<I, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (V, Term)>,
        V: AsRef<str>,
    {
        Map(pairs
            .into_iter()
            .map(|(v, t)| (Var::from(v.as_ref()), Some(t)))
            .collect())
    }

    pub fn bind(&mut self, var: &str, value: Term) {
        self.0.insert(Var::from(var), Some(value));
    }

    pub fn insert(&mut self, var: Var, value: Option<Term>) {
        self.0.insert(var, value);
    }

    /// `Some(None)` for a variable completed to null.
    pub fn get(&self, var: &str) -> Option<&Option<Term>> {
        self.0.get(var)
    }

    /// The non-null value of `var`, if any.
    pub fn value(&self, var: &str) -> Option<&Term> {
        self.0.get(var).and_then(Option::as_ref)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.0.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Option<Term>)> {
        self.0.iter()
    }

    /// σ|X ∪ completion: keeps `vars` only and sends missing ones to null.
    pub fn project(&self, vars: &[Var]) -> Map {
        Map(vars
            .iter()
            .map(|v| (v.clone(), self.0.get(v).cloned().flatten()))
            .collect())
    }
}

impl fmt::Display for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match v {
                Some(t) => write!(f, "?{k}←{t}")?,
                None => write!(f, "?{k}←null")?,
            }
        }
        f.write_str("}")
    }
}

/// Two maps are compatible when they agree on their shared variables.
pub fn compatible(a: &Map, b: &Map) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .0
        .iter()
        .all(|(k, v)| large.0.get(k).is_none_or(|w| w == v))
}

/// σ₁ ⊕ σ₂, or `None` if the maps are not compatible.
pub fn merge(a: &Map, b: &Map) -> Option<Map> {
    if !compatible(a, b) {
        return None;
    }
    let mut out = a.clone();
    for (k, v) in &b.0 {
        out.0.insert(k.clone(), v.clone());
    }
    Some(out)
}

pub fn join(left: &AnswerSet, right: &AnswerSet) -> AnswerSet {
    let mut out = AnswerSet::new();
    for a in left {
        for b in right {
            if let Some(m) = merge(a, b) {
                out.insert(m);
            }
        }
    }
    out
}

/// Maps of `left` compatible with no map of `right`.
pub fn difference(left: &AnswerSet, right: &AnswerSet) -> AnswerSet {
    left.iter()
        .filter(|a| right.iter().all(|b| !compatible(a, b)))
        .cloned()
        .collect()
}

/// The unit of [`join`]: a single empty map.
pub fn unit() -> AnswerSet {
    AnswerSet::from([Map::new()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(&str, &str)]) -> Map {
        Map::from_pairs(pairs.iter().map(|(k, v)| (*k, Term::iri(v))))
    }

    #[test]
    fn compatibility() {
        assert!(compatible(&m(&[("x", "a")]), &m(&[("y", "b")])));
        assert_eq!(merge(&m(&[("x", "a")]), &m(&[("y", "b")])), Some(m(&[("x", "a"), ("y", "b")])));
        assert!(!compatible(&m(&[("x", "a")]), &m(&[("x", "b")])));
        assert_eq!(
            merge(&m(&[("x", "a"), ("y", "b")]), &m(&[("y", "b")])),
            Some(m(&[("x", "a"), ("y", "b")]))
        );
    }

    #[test]
    fn join_and_difference() {
        let l = AnswerSet::from([m(&[("x", "a")])]);
        let r = AnswerSet::from([m(&[("x", "a"), ("y", "b")]), m(&[("x", "c")])]);
        assert_eq!(join(&l, &r), AnswerSet::from([m(&[("x", "a"), ("y", "b")])]));
        assert_eq!(join(&r, &unit()), r);
        assert!(difference(&l, &AnswerSet::from([m(&[("y", "b")])])).is_empty());
        assert_eq!(difference(&l, &AnswerSet::new()), l);
    }

    #[test]
    fn null_is_an_ordinary_value() {
        let mut a = Map::new();
        a.insert(Var::from("x"), None);
        assert!(compatible(&a, &a.clone()));
        assert!(!compatible(&a, &m(&[("x", "a")])));
        assert_eq!(m(&[("x", "a")]).project(&[Var::from("x"), Var::from("y")]).get("y"), Some(&None));
    }
}
