//! Forward chaining under the RDFS rules.
//!
//! The engine is semi-naive: every triple is joined against the store once,
//! when it is first derived, and each rule is triggered from whichever of its
//! premises arrives last.

use std::collections::{HashMap, HashSet};
use std::fmt;

use log::warn;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homomorphism::BasicGraphPattern;
use crate::term::{vocab, Term, Triple, RDF, RDFS};

/// Default bound on the number of derived triples.
pub const DEFAULT_TRIPLE_CAP: usize = 1_000_000;

/// Environment variable that overrides [`DEFAULT_TRIPLE_CAP`].
pub const TRIPLE_CAP_ENV: &str = "PATHRDF_TRIPLE_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    SpTrans,
    ScTrans,
    SpInherit,
    ScType,
    DomType,
    RangeType,
    Rdf2,
    Rdfs6,
    Rdfs7,
    Rdfs8a,
    Rdfs8b,
    Rdfs9,
    Rdfs10,
    Rdfs11,
    Rdfs12a,
    Rdfs12b,
    Rdfs13,
    Rdfs14,
}

impl RuleId {
    /// The six rules of the RDFS core fragment.
    pub const RHO_DF: [RuleId; 6] = [
        RuleId::SpTrans,
        RuleId::ScTrans,
        RuleId::SpInherit,
        RuleId::ScType,
        RuleId::DomType,
        RuleId::RangeType,
    ];

    pub const EXTENDED: [RuleId; 12] = [
        RuleId::Rdf2,
        RuleId::Rdfs6,
        RuleId::Rdfs7,
        RuleId::Rdfs8a,
        RuleId::Rdfs8b,
        RuleId::Rdfs9,
        RuleId::Rdfs10,
        RuleId::Rdfs11,
        RuleId::Rdfs12a,
        RuleId::Rdfs12b,
        RuleId::Rdfs13,
        RuleId::Rdfs14,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RuleId::SpTrans => "sp-trans",
            RuleId::ScTrans => "sc-trans",
            RuleId::SpInherit => "sp-inherit",
            RuleId::ScType => "sc-type",
            RuleId::DomType => "dom-type",
            RuleId::RangeType => "range-type",
            RuleId::Rdf2 => "RDF2",
            RuleId::Rdfs6 => "RDFS6",
            RuleId::Rdfs7 => "RDFS7",
            RuleId::Rdfs8a => "RDFS8a",
            RuleId::Rdfs8b => "RDFS8b",
            RuleId::Rdfs9 => "RDFS9",
            RuleId::Rdfs10 => "RDFS10",
            RuleId::Rdfs11 => "RDFS11",
            RuleId::Rdfs12a => "RDFS12a",
            RuleId::Rdfs12b => "RDFS12b",
            RuleId::Rdfs13 => "RDFS13",
            RuleId::Rdfs14 => "RDFS14",
        }
    }

    /// Rules that make sc/sp reflexive.
    pub fn is_reflexive(&self) -> bool {
        matches!(self, RuleId::Rdfs8a | RuleId::Rdfs12a)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureConfig {
    /// Apply [RDFS 8a] and [RDFS 12a].
    pub reflexive: bool,
    /// Use the extended rule set instead of the six core rules.
    pub extended: bool,
    /// Inject axiomatic triples; requires `context`.
    pub axiomatic: bool,
    /// Query pattern bounding the `rdf:_i` axioms of a partial closure.
    pub context: Option<BasicGraphPattern>,
    /// Derived-triple cap; `None` reads the environment or uses the default.
    pub cap: Option<usize>,
}

impl ClosureConfig {
    pub fn rho_df() -> Self {
        ClosureConfig::default()
    }

    pub fn extended() -> Self {
        ClosureConfig {
            extended: true,
            ..ClosureConfig::default()
        }
    }

    /// The rules this configuration applies. Reflexive rules are included
    /// whenever `reflexive` is set, even with the core rule set.
    pub fn rules(&self) -> Vec<RuleId> {
        let mut rules: Vec<RuleId> = if self.extended {
            RuleId::EXTENDED.to_vec()
        } else {
            RuleId::RHO_DF.to_vec()
        };
        rules.retain(|r| !r.is_reflexive());
        if self.reflexive {
            rules.extend([RuleId::Rdfs8a, RuleId::Rdfs12a]);
        }
        rules
    }

    fn effective_cap(&self) -> Result<usize> {
        if let Some(cap) = self.cap {
            return Ok(cap);
        }
        match std::env::var(TRIPLE_CAP_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                Error::InvalidConfig(format!("{TRIPLE_CAP_ENV} must be a non-negative integer, got {v:?}"))
            }),
            Err(_) => Ok(DEFAULT_TRIPLE_CAP),
        }
    }
}

/// Whether a ρdf term occurs in subject or object position.
pub fn is_genuine(g: &Graph) -> bool {
    g.triples().all(|t| !t.s.is_rho_df() && !t.o.is_rho_df())
}

/// Saturates `g` under the rule set of `cfg`.
pub fn closure(g: &Graph, cfg: &ClosureConfig) -> Result<Graph> {
    let cap = cfg.effective_cap()?;
    let mut seed: Vec<Triple> = g.triples().collect();
    if cfg.axiomatic {
        let Some(h) = &cfg.context else {
            return Err(Error::InvalidConfig(
                "axiomatic triples are only supported for a partial closure (set a context pattern)".into(),
            ));
        };
        let k = max_container_index(g.triples().chain(h.triples.iter().cloned()));
        seed.extend(axiomatic_triples(k));
    }
    let mut engine = Engine::new(&cfg.rules(), cap);
    let base = seed.len();
    engine.run(seed, base)?;
    Graph::from_triples(engine.into_triples())
}

/// Ĝ\\H with the core rules: no reflexive sc/sp triples, no axioms.
pub fn non_reflexive_closure(g: &Graph, h: &BasicGraphPattern) -> Result<Graph> {
    non_reflexive_closure_with(g, h, &ClosureConfig::rho_df())
}

/// Ĝ\\H for an arbitrary rule set; `reflexive` is forced off and `h` becomes
/// the context. A non-genuine input only logs a warning.
pub fn non_reflexive_closure_with(g: &Graph, h: &BasicGraphPattern, cfg: &ClosureConfig) -> Result<Graph> {
    if !is_genuine(g) {
        warn!("graph is not genuine: RDFS query answering may be incomplete");
    }
    let cfg = ClosureConfig {
        reflexive: false,
        context: Some(h.clone()),
        ..cfg.clone()
    };
    closure(g, &cfg)
}

/// Largest `i` such that `rdf:_i` occurs in the triples.
pub fn max_container_index<I: IntoIterator<Item = Triple>>(triples: I) -> usize {
    triples
        .into_iter()
        .flat_map(|t| [t.s, t.p, t.o])
        .filter_map(|t| match t {
            Term::Iri(s) => s.strip_prefix(RDF)?.strip_prefix('_')?.parse::<usize>().ok(),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// RDF and RDFS axiomatic triples with container properties `rdf:_1..=rdf:_k`.
pub fn axiomatic_triples(k: usize) -> Vec<Triple> {
    let rdf = |l: &str| Term::iri(format!("{RDF}{l}"));
    let rdfs = |l: &str| Term::iri(format!("{RDFS}{l}"));
    let t = |s, p, o| Triple::new(s, p, o);
    let ty = Term::rdf_type();
    let dom = Term::domain();
    let range = Term::range();
    let mut out = Vec::new();
    for p in ["type", "subject", "predicate", "object", "first", "rest", "value"] {
        out.push(t(rdf(p), ty.clone(), rdf("Property")));
    }
    out.push(t(rdf("nil"), ty.clone(), rdf("List")));
    let domains = [
        (rdf("type"), rdfs("Resource")),
        (rdfs("domain"), rdf("Property")),
        (rdfs("range"), rdf("Property")),
        (rdfs("subPropertyOf"), rdf("Property")),
        (rdfs("subClassOf"), rdfs("Class")),
        (rdf("subject"), rdf("Statement")),
        (rdf("predicate"), rdf("Statement")),
        (rdf("object"), rdf("Statement")),
        (rdfs("member"), rdfs("Resource")),
        (rdf("first"), rdf("List")),
        (rdf("rest"), rdf("List")),
        (rdfs("seeAlso"), rdfs("Resource")),
        (rdfs("isDefinedBy"), rdfs("Resource")),
        (rdfs("comment"), rdfs("Resource")),
        (rdfs("label"), rdfs("Resource")),
        (rdf("value"), rdfs("Resource")),
    ];
    for (s, o) in domains {
        out.push(t(s, dom.clone(), o));
    }
    let ranges = [
        (rdf("type"), rdfs("Class")),
        (rdfs("domain"), rdfs("Class")),
        (rdfs("range"), rdfs("Class")),
        (rdfs("subPropertyOf"), rdf("Property")),
        (rdfs("subClassOf"), rdfs("Class")),
        (rdf("subject"), rdfs("Resource")),
        (rdf("predicate"), rdfs("Resource")),
        (rdf("object"), rdfs("Resource")),
        (rdfs("member"), rdfs("Resource")),
        (rdf("first"), rdfs("Resource")),
        (rdf("rest"), rdf("List")),
        (rdfs("seeAlso"), rdfs("Resource")),
        (rdfs("isDefinedBy"), rdfs("Resource")),
        (rdfs("comment"), rdfs("Literal")),
        (rdfs("label"), rdfs("Literal")),
        (rdf("value"), rdfs("Resource")),
    ];
    for (s, o) in ranges {
        out.push(t(s, range.clone(), o));
    }
    for c in ["Alt", "Bag", "Seq"] {
        out.push(t(rdf(c), Term::sub_class_of(), rdfs("Container")));
    }
    out.push(t(rdfs("ContainerMembershipProperty"), Term::sub_class_of(), rdf("Property")));
    out.push(t(rdfs("isDefinedBy"), Term::sub_property_of(), rdfs("seeAlso")));
    out.push(t(rdf("XMLLiteral"), ty.clone(), rdfs("Datatype")));
    for i in 1..=k {
        let p = rdf(&format!("_{i}"));
        out.push(t(p.clone(), ty.clone(), rdfs("ContainerMembershipProperty")));
        out.push(t(p.clone(), dom.clone(), rdfs("Resource")));
        out.push(t(p, range.clone(), rdfs("Resource")));
    }
    out
}

type Id = u32;

/// Vocabulary ids the rules mention.
struct Voc {
    sp: Id,
    sc: Id,
    ty: Id,
    dom: Id,
    range: Id,
    prop: Id,
    class: Id,
    resource: Id,
    literal: Id,
    datatype: Id,
    member: Id,
    cmp: Id,
}

#[derive(Default)]
struct Flags {
    sp_trans: bool,
    sc_trans: bool,
    sp_inherit: bool,
    sc_type: bool,
    dom_type: bool,
    range_type: bool,
    rdf2: bool,
    refl_sp: bool,
    rdfs10: bool,
    refl_sc: bool,
    rdfs13: bool,
    rdfs14: bool,
}

struct Engine {
    terms: Vec<Term>,
    ids: HashMap<Term, Id>,
    voc: Voc,
    flags: Flags,
    store: HashSet<[Id; 3]>,
    order: Vec<[Id; 3]>,
    by_p: HashMap<Id, Vec<(Id, Id)>>,
    by_ps: HashMap<(Id, Id), Vec<Id>>,
    by_po: HashMap<(Id, Id), Vec<Id>>,
    cap: usize,
    base: usize,
}

impl Engine {
    fn new(rules: &[RuleId], cap: usize) -> Self {
        let mut terms = Vec::new();
        let mut ids = HashMap::new();
        let mut intern = |iri: &str| {
            let t = Term::iri(iri);
            *ids.entry(t.clone()).or_insert_with(|| {
                terms.push(t);
                (terms.len() - 1) as Id
            })
        };
        let voc = Voc {
            sp: intern(vocab::SUB_PROPERTY_OF),
            sc: intern(vocab::SUB_CLASS_OF),
            ty: intern(vocab::TYPE),
            dom: intern(vocab::DOMAIN),
            range: intern(vocab::RANGE),
            prop: intern(vocab::PROPERTY),
            class: intern(vocab::CLASS),
            resource: intern(vocab::RESOURCE),
            literal: intern(vocab::LITERAL),
            datatype: intern(vocab::DATATYPE),
            member: intern(vocab::MEMBER),
            cmp: intern(vocab::CONTAINER_MEMBERSHIP_PROPERTY),
        };
        let mut flags = Flags::default();
        for r in rules {
            match r {
                RuleId::SpTrans | RuleId::Rdfs8b => flags.sp_trans = true,
                RuleId::ScTrans | RuleId::Rdfs12b => flags.sc_trans = true,
                RuleId::SpInherit | RuleId::Rdfs9 => flags.sp_inherit = true,
                RuleId::ScType | RuleId::Rdfs11 => flags.sc_type = true,
                RuleId::DomType | RuleId::Rdfs6 => flags.dom_type = true,
                RuleId::RangeType | RuleId::Rdfs7 => flags.range_type = true,
                RuleId::Rdf2 => flags.rdf2 = true,
                RuleId::Rdfs8a => flags.refl_sp = true,
                RuleId::Rdfs10 => flags.rdfs10 = true,
                RuleId::Rdfs12a => flags.refl_sc = true,
                RuleId::Rdfs13 => flags.rdfs13 = true,
                RuleId::Rdfs14 => flags.rdfs14 = true,
            }
        }
        Engine {
            terms,
            ids,
            voc,
            flags,
            store: HashSet::new(),
            order: Vec::new(),
            by_p: HashMap::new(),
            by_ps: HashMap::new(),
            by_po: HashMap::new(),
            cap,
            base: 0,
        }
    }

    fn intern(&mut self, t: Term) -> Id {
        if let Some(&id) = self.ids.get(&t) {
            return id;
        }
        self.terms.push(t.clone());
        let id = (self.terms.len() - 1) as Id;
        self.ids.insert(t, id);
        id
    }

    fn run(&mut self, seed: Vec<Triple>, base: usize) -> Result<()> {
        let mut queue: Vec<[Id; 3]> = Vec::with_capacity(seed.len());
        for t in seed {
            let enc = [self.intern(t.s), self.intern(t.p), self.intern(t.o)];
            if self.insert(enc) {
                queue.push(enc);
            }
        }
        self.base = base.min(self.store.len());
        let mut head = 0;
        let mut derived = Vec::new();
        while head < queue.len() {
            let t = queue[head];
            head += 1;
            self.fire(t, &mut derived);
            for d in derived.drain(..) {
                if self.terms[d[1] as usize].is_iri() && self.insert(d) {
                    if self.store.len() - self.base > self.cap {
                        return Err(Error::TripleCap { cap: self.cap });
                    }
                    queue.push(d);
                }
            }
        }
        Ok(())
    }

    fn insert(&mut self, t: [Id; 3]) -> bool {
        if !self.store.insert(t) {
            return false;
        }
        let [s, p, o] = t;
        self.order.push(t);
        self.by_p.entry(p).or_default().push((s, o));
        self.by_ps.entry((p, s)).or_default().push(o);
        self.by_po.entry((p, o)).or_default().push(s);
        true
    }

    fn objects(&self, p: Id, s: Id) -> &[Id] {
        self.by_ps.get(&(p, s)).map_or(&[], Vec::as_slice)
    }

    fn subjects(&self, p: Id, o: Id) -> &[Id] {
        self.by_po.get(&(p, o)).map_or(&[], Vec::as_slice)
    }

    fn pairs(&self, p: Id) -> &[(Id, Id)] {
        self.by_p.get(&p).map_or(&[], Vec::as_slice)
    }

    /// Conclusions of every rule instance that uses `t` as a premise, the
    /// other premise taken from the current store.
    fn fire(&self, t: [Id; 3], out: &mut Vec<[Id; 3]>) {
        let [s, p, o] = t;
        let v = &self.voc;
        let f = &self.flags;
        if f.sp_trans && p == v.sp {
            out.extend(self.objects(v.sp, o).iter().map(|&r| [s, v.sp, r]));
            out.extend(self.subjects(v.sp, s).iter().map(|&q| [q, v.sp, o]));
        }
        if f.sc_trans && p == v.sc {
            out.extend(self.objects(v.sc, o).iter().map(|&r| [s, v.sc, r]));
            out.extend(self.subjects(v.sc, s).iter().map(|&q| [q, v.sc, o]));
        }
        if f.sp_inherit {
            if p == v.sp {
                out.extend(self.pairs(s).iter().map(|&(x, y)| [x, o, y]));
            }
            out.extend(self.objects(v.sp, p).iter().map(|&q| [s, q, o]));
        }
        if f.sc_type {
            if p == v.sc {
                out.extend(self.subjects(v.ty, s).iter().map(|&x| [x, v.ty, o]));
            }
            if p == v.ty {
                out.extend(self.objects(v.sc, o).iter().map(|&b| [s, v.ty, b]));
            }
        }
        if f.dom_type {
            if p == v.dom {
                out.extend(self.pairs(s).iter().map(|&(x, _)| [x, v.ty, o]));
            }
            out.extend(self.objects(v.dom, p).iter().map(|&a| [s, v.ty, a]));
        }
        if f.range_type {
            if p == v.range {
                out.extend(self.pairs(s).iter().map(|&(_, y)| [y, v.ty, o]));
            }
            out.extend(self.objects(v.range, p).iter().map(|&a| [o, v.ty, a]));
        }
        if f.rdf2 {
            out.push([p, v.ty, v.prop]);
        }
        if p == v.ty {
            if f.refl_sp && o == v.prop {
                out.push([s, v.sp, s]);
            }
            if f.rdfs10 && o == v.class {
                out.push([s, v.sc, v.resource]);
            }
            if f.refl_sc && o == v.class {
                out.push([s, v.sc, s]);
            }
            if f.rdfs13 && o == v.cmp {
                out.push([s, v.sp, v.member]);
            }
            if f.rdfs14 && o == v.datatype {
                out.push([s, v.sc, v.literal]);
            }
        }
    }

    fn into_triples(self) -> Vec<Triple> {
        let terms = self.terms;
        self.order
            .into_iter()
            .map(|[s, p, o]| {
                Triple::new(
                    terms[s as usize].clone(),
                    terms[p as usize].clone(),
                    terms[o as usize].clone(),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntriples::parse_ntriples;

    fn close(text: &str, cfg: &ClosureConfig) -> Graph {
        closure(&parse_ntriples(text).unwrap(), cfg).unwrap()
    }

    #[test]
    fn sp_chain_and_inheritance() {
        let g = close("a sp b .\nb sp c .\nx a y .", &ClosureConfig::rho_df());
        let expected = parse_ntriples("a sp b .\nb sp c .\nx a y .\na sp c .\nx b y .\nx c y .").unwrap();
        assert_eq!(g, expected);
    }

    #[test]
    fn empty_stays_empty() {
        assert!(close("", &ClosureConfig::rho_df()).is_empty());
        assert!(close("", &ClosureConfig::extended()).is_empty());
    }

    #[test]
    fn extended_rules_type_predicates() {
        let g = close("a sp b .", &ClosureConfig::extended());
        assert!(g.contains(&Triple::new(Term::sub_property_of(), Term::rdf_type(), Term::iri(vocab::PROPERTY))));
        let refl = ClosureConfig {
            reflexive: true,
            ..ClosureConfig::extended()
        };
        // RDF2 types the predicate, then RDFS8a makes it reflexive
        let g = close("a p b .", &refl);
        assert!(g.contains(&Triple::new(Term::iri("p"), Term::sub_property_of(), Term::iri("p"))));
        assert!(!g.contains(&Triple::new(Term::iri("a"), Term::sub_property_of(), Term::iri("a"))));
    }

    #[test]
    fn container_membership_reads_as_subproperty() {
        let g = close("p type rdfs:ContainerMembershipProperty .", &ClosureConfig::extended());
        assert!(g.contains(&Triple::new(Term::iri("p"), Term::sub_property_of(), Term::iri(vocab::MEMBER))));
    }

    #[test]
    fn cap_aborts() {
        let cfg = ClosureConfig {
            cap: Some(2),
            ..ClosureConfig::rho_df()
        };
        let g = parse_ntriples("a sp b .\nb sp c .\nc sp d .\nd sp e .").unwrap();
        assert_eq!(closure(&g, &cfg), Err(Error::TripleCap { cap: 2 }));
    }

    #[test]
    fn axioms_need_context() {
        let cfg = ClosureConfig {
            axiomatic: true,
            ..ClosureConfig::rho_df()
        };
        assert!(matches!(closure(&Graph::new(), &cfg), Err(Error::InvalidConfig(_))));
        let cfg = ClosureConfig {
            context: Some(BasicGraphPattern::new(vec![Triple::new(
                Term::var("x"),
                Term::iri(format!("{RDF}_3")),
                Term::var("y"),
            )])),
            ..cfg
        };
        let g = closure(&Graph::new(), &cfg).unwrap();
        assert!(g.contains(&Triple::new(
            Term::iri(format!("{RDF}_3")),
            Term::rdf_type(),
            Term::iri(vocab::CONTAINER_MEMBERSHIP_PROPERTY)
        )));
        assert!(!g.voc().contains(&Term::iri(format!("{RDF}_4"))));
    }

    #[test]
    fn genuineness() {
        assert!(!is_genuine(&parse_ntriples("sp type prop .").unwrap()));
        assert!(!is_genuine(&parse_ntriples("a sc sc .").unwrap()));
        assert!(is_genuine(&parse_ntriples("a sc b .").unwrap()));
    }
}
