//! RDF terms, triples and the prefix table used by every text format.

use std::fmt;
use std::sync::Arc;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
/// Namespace that data blank nodes are renamed into.
pub const BLANK_NS: &str = "urn:pathrdf:bnode:";

/// Vocabulary IRIs of the RDFS core fragment and the terms the extended
/// rule set mentions.
pub mod vocab {
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const PROPERTY: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const SUB_PROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
    pub const DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
    pub const CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const RESOURCE: &str = "http://www.w3.org/2000/01/rdf-schema#Resource";
    pub const LITERAL: &str = "http://www.w3.org/2000/01/rdf-schema#Literal";
    pub const DATATYPE: &str = "http://www.w3.org/2000/01/rdf-schema#Datatype";
    pub const MEMBER: &str = "http://www.w3.org/2000/01/rdf-schema#member";
    pub const CONTAINER_MEMBERSHIP_PROPERTY: &str =
        "http://www.w3.org/2000/01/rdf-schema#ContainerMembershipProperty";

    /// The five predicates of the RDFS core: sc, sp, type, dom, range.
    pub const RHO_DF: [&str; 5] = [SUB_CLASS_OF, SUB_PROPERTY_OF, TYPE, DOMAIN, RANGE];
}

/// Bare shortcut names accepted in every text format.
pub const SHORTCUTS: [(&str, &str); 6] = [
    ("sc", vocab::SUB_CLASS_OF),
    ("sp", vocab::SUB_PROPERTY_OF),
    ("type", vocab::TYPE),
    ("dom", vocab::DOMAIN),
    ("range", vocab::RANGE),
    ("prop", vocab::PROPERTY),
];

/// Bare words with a meaning of their own in path or query text. IRIs
/// spelled like one of them are always written in angle brackets.
pub const RESERVED: [&str; 16] = [
    "self", "next", "edge", "node", "eps", "TRUE", "FILTER", "SELECT", "WHERE", "FROM", "UNION",
    "OPTIONAL", "bound", "regex", "a", "true",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Arc<str>),
    Literal(Arc<str>),
    /// Name without the leading `?` (or `_:` in query text).
    Variable(Arc<str>),
}

impl Term {
    pub fn iri(s: impl AsRef<str>) -> Self {
        Term::Iri(Arc::from(s.as_ref()))
    }

    pub fn literal(s: impl AsRef<str>) -> Self {
        Term::Literal(Arc::from(s.as_ref()))
    }

    pub fn var(s: impl AsRef<str>) -> Self {
        let s = s.as_ref();
        Term::Variable(Arc::from(s.strip_prefix('?').unwrap_or(s)))
    }

    pub fn lexical(&self) -> &str {
        match self {
            Term::Iri(s) | Term::Literal(s) | Term::Variable(s) => s,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_iri_eq(&self, iri: &str) -> bool {
        matches!(self, Term::Iri(s) if &**s == iri)
    }

    pub fn is_rho_df(&self) -> bool {
        match self {
            Term::Iri(s) => vocab::RHO_DF.contains(&&**s),
            _ => false,
        }
    }

    /// Numeric value of a literal whose lexical form is an integer or a decimal.
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Term::Literal(s) if is_numeric(s) => s.parse().ok(),
            _ => None,
        }
    }

    pub fn rdf_type() -> Self {
        Term::iri(vocab::TYPE)
    }
    pub fn sub_class_of() -> Self {
        Term::iri(vocab::SUB_CLASS_OF)
    }
    pub fn sub_property_of() -> Self {
        Term::iri(vocab::SUB_PROPERTY_OF)
    }
    pub fn domain() -> Self {
        Term::iri(vocab::DOMAIN)
    }
    pub fn range() -> Self {
        Term::iri(vocab::RANGE)
    }
}

pub(crate) fn is_numeric(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    let mut parts = digits.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next();
    !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Prefixes::default().render(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub s: Term,
    pub p: Term,
    pub o: Term,
}

impl Triple {
    pub fn new(s: Term, p: Term, o: Term) -> Self {
        Triple { s, p, o }
    }

    pub fn is_ground(&self) -> bool {
        !(self.s.is_variable() || self.p.is_variable() || self.o.is_variable())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.s, self.p, self.o)
    }
}

/// Prefix table used to expand `prefix:local` names and to compact IRIs on
/// output. The defaults cover `dm:`, `rn:`, `rdf:`, `rdfs:` and `ex:`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefixes {
    entries: Vec<(String, String)>,
}

impl Default for Prefixes {
    fn default() -> Self {
        Prefixes {
            entries: vec![
                ("rdf".into(), RDF.into()),
                ("rdfs".into(), RDFS.into()),
                ("dm".into(), "http://example.org/dm#".into()),
                ("rn".into(), "http://example.org/rn#".into()),
                ("ex".into(), "http://example.org/".into()),
            ],
        }
    }
}

impl Prefixes {
    /// Adds or replaces a prefix binding.
    pub fn insert(&mut self, prefix: &str, iri: &str) {
        if let Some(e) = self.entries.iter_mut().find(|(p, _)| p == prefix) {
            e.1 = iri.to_string();
        } else {
            self.entries.push((prefix.to_string(), iri.to_string()));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, i)| (p.as_str(), i.as_str()))
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(p, _)| p == prefix)
            .map(|(_, i)| i.as_str())
    }

    /// Resolves a bare token (no brackets, no quotes) to an IRI string.
    /// Unknown prefixes are kept verbatim.
    pub fn expand(&self, token: &str) -> String {
        if let Some((_, iri)) = SHORTCUTS.iter().find(|(s, _)| *s == token) {
            return (*iri).to_string();
        }
        if let Some((prefix, local)) = token.split_once(':') {
            if let Some(ns) = self.get(prefix) {
                return format!("{ns}{local}");
            }
        }
        token.to_string()
    }

    /// Compact surface form of a term, parseable back to the same term.
    pub fn render(&self, term: &Term) -> String {
        match term {
            Term::Variable(v) => format!("?{v}"),
            Term::Literal(l) => {
                let mut out = String::with_capacity(l.len() + 2);
                out.push('"');
                for c in l.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c => out.push(c),
                    }
                }
                out.push('"');
                out
            }
            Term::Iri(iri) => self.render_iri(iri),
        }
    }

    fn render_iri(&self, iri: &str) -> String {
        if let Some((short, _)) = SHORTCUTS.iter().find(|(_, i)| *i == iri) {
            return (*short).to_string();
        }
        // longest namespace wins
        let mut best: Option<(&str, &str)> = None;
        for (p, ns) in &self.entries {
            if let Some(local) = iri.strip_prefix(ns.as_str()) {
                if is_local_name(local) && best.is_none_or(|(_, l)| local.len() < l.len()) {
                    best = Some((p, local));
                }
            }
        }
        if let Some((p, local)) = best {
            let candidate = format!("{p}:{local}");
            if self.expand(&candidate) == iri {
                return candidate;
            }
        }
        let bare_ok = is_local_name(iri)
            && !iri.contains(':')
            && !RESERVED.contains(&iri)
            && !is_numeric(iri)
            && self.expand(iri) == iri;
        if bare_ok {
            iri.to_string()
        } else {
            format!("<{iri}>")
        }
    }
}

fn is_local_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    s.chars()
        .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':'))
        && !s.ends_with('.')
        && !s.contains("::")
        && !s.contains("..")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_recognition() {
        assert!(is_numeric("4"));
        assert!(is_numeric("-20.5"));
        assert!(!is_numeric("4."));
        assert!(!is_numeric("x4"));
        assert!(!is_numeric(""));
        assert_eq!(Term::literal("20000").as_number(), Some(20000.0));
        assert_eq!(Term::iri("4").as_number(), None);
    }

    #[test]
    fn shortcuts_and_prefixes_expand() {
        let p = Prefixes::default();
        assert_eq!(p.expand("sp"), vocab::SUB_PROPERTY_OF);
        assert_eq!(p.expand("rdf:type"), vocab::TYPE);
        assert_eq!(p.expand("dm:bcd"), "http://example.org/dm#bcd");
        assert_eq!(p.expand("owl:inverseOf"), "owl:inverseOf");
        assert_eq!(p.expand("Paris"), "Paris");
    }

    #[test]
    fn render_compacts() {
        let p = Prefixes::default();
        assert_eq!(p.render(&Term::rdf_type()), "type");
        assert_eq!(p.render(&Term::iri(RDFS.to_string() + "Class")), "rdfs:Class");
        assert_eq!(p.render(&Term::iri("http://example.org/dm#Kr")), "dm:Kr");
        assert_eq!(p.render(&Term::iri("Paris")), "Paris");
        assert_eq!(p.render(&Term::iri("next")), "<next>");
        assert_eq!(p.render(&Term::iri("sp")), "<sp>");
        assert_eq!(p.render(&Term::literal("a\"b")), "\"a\\\"b\"");
        assert_eq!(p.render(&Term::var("x")), "?x");
    }

    #[test]
    fn rho_df_membership() {
        assert!(Term::sub_class_of().is_rho_df());
        assert!(!Term::iri(vocab::PROPERTY).is_rho_df());
        assert!(!Term::literal(vocab::TYPE).is_rho_df());
    }
}
