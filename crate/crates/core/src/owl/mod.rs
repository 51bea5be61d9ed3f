//! The slice of OWL 2 the conversions emit: six axiom kinds over named
//! classes, `hasSelf`/`someValuesFrom` restrictions, boolean class
//! combinations and property chains.

mod iri;
mod manchester;
mod turtle;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

pub use iri::{decode_local, encode_local, Iri};
pub use manchester::Manchester;
pub use turtle::{read_turtle, Turtle};

pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OwlError {
    #[error("not an absolute IRI: `{0}`")]
    RelativeIri(String),
    #[error("turtle syntax error: {0}")]
    Turtle(String),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("unknown serialization format `{0}`")]
    UnknownFormat(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    NamedIndividual,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpr {
    Named(Iri),
    Thing,
    /// `P some Self`
    HasSelf(Iri),
    SomeValuesFrom(Iri, Box<ClassExpr>),
    IntersectionOf(Vec<ClassExpr>),
    UnionOf(Vec<ClassExpr>),
}

impl ClassExpr {
    pub fn named(iri: &Iri) -> Self {
        ClassExpr::Named(iri.clone())
    }

    pub fn and(operands: Vec<ClassExpr>) -> Self {
        assert!(operands.len() >= 2, "intersection needs two operands");
        ClassExpr::IntersectionOf(operands)
    }

    pub fn or(operands: Vec<ClassExpr>) -> Self {
        assert!(operands.len() >= 2, "union needs two operands");
        ClassExpr::UnionOf(operands)
    }

    pub fn as_named(&self) -> Option<&Iri> {
        match self {
            ClassExpr::Named(i) => Some(i),
            _ => None,
        }
    }

    fn well_formed(&self) -> bool {
        match self {
            ClassExpr::Named(_) | ClassExpr::Thing | ClassExpr::HasSelf(_) => true,
            ClassExpr::SomeValuesFrom(_, f) => f.well_formed(),
            ClassExpr::IntersectionOf(ops) | ClassExpr::UnionOf(ops) => {
                ops.len() >= 2 && ops.iter().all(ClassExpr::well_formed)
            }
        }
    }

    fn collect_entities(&self, out: &mut Vec<(EntityKind, Iri)>) {
        match self {
            ClassExpr::Named(c) => out.push((EntityKind::Class, c.clone())),
            ClassExpr::Thing => {}
            ClassExpr::HasSelf(p) => out.push((EntityKind::ObjectProperty, p.clone())),
            ClassExpr::SomeValuesFrom(p, f) => {
                out.push((EntityKind::ObjectProperty, p.clone()));
                f.collect_entities(out);
            }
            ClassExpr::IntersectionOf(ops) | ClassExpr::UnionOf(ops) => {
                ops.iter().for_each(|o| o.collect_entities(out))
            }
        }
    }
}

/// A member of a property chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyTerm {
    Named(Iri),
    Inverse(Iri),
}

impl PropertyTerm {
    pub fn iri(&self) -> &Iri {
        match self {
            PropertyTerm::Named(i) | PropertyTerm::Inverse(i) => i,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Declaration(EntityKind, Iri),
    SubClassOf(ClassExpr, ClassExpr),
    EquivalentClasses(ClassExpr, ClassExpr),
    SubPropertyChainOf { chain: Vec<PropertyTerm>, sup: Iri },
    ClassAssertion(ClassExpr, Iri),
    ObjectPropertyAssertion { property: Iri, subject: Iri, object: Iri },
}

impl Axiom {
    pub fn is_declaration(&self) -> bool {
        matches!(self, Axiom::Declaration(..))
    }

    fn well_formed(&self) -> bool {
        match self {
            Axiom::Declaration(..) | Axiom::ObjectPropertyAssertion { .. } => true,
            Axiom::SubClassOf(a, b) | Axiom::EquivalentClasses(a, b) => a.well_formed() && b.well_formed(),
            Axiom::SubPropertyChainOf { chain, .. } => chain.len() >= 2,
            Axiom::ClassAssertion(c, _) => c.well_formed(),
        }
    }

    /// Entities a logical axiom mentions (empty for declarations).
    pub fn entities(&self) -> Vec<(EntityKind, Iri)> {
        let mut out = Vec::new();
        match self {
            Axiom::Declaration(..) => {}
            Axiom::SubClassOf(a, b) | Axiom::EquivalentClasses(a, b) => {
                a.collect_entities(&mut out);
                b.collect_entities(&mut out);
            }
            Axiom::SubPropertyChainOf { chain, sup } => {
                for t in chain {
                    out.push((EntityKind::ObjectProperty, t.iri().clone()));
                }
                out.push((EntityKind::ObjectProperty, sup.clone()));
            }
            Axiom::ClassAssertion(c, i) => {
                c.collect_entities(&mut out);
                out.push((EntityKind::NamedIndividual, i.clone()));
            }
            Axiom::ObjectPropertyAssertion {
                property,
                subject,
                object,
            } => {
                out.push((EntityKind::ObjectProperty, property.clone()));
                out.push((EntityKind::NamedIndividual, subject.clone()));
                out.push((EntityKind::NamedIndividual, object.clone()));
            }
        }
        out
    }
}

/// An ordered, duplicate-free axiom list. Order is emission order, which
/// both serializers follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ontology {
    base: Iri,
    prefixes: Vec<(String, String)>,
    axioms: IndexSet<Axiom>,
}

impl Ontology {
    pub fn new(base: Iri) -> Self {
        Ontology {
            base,
            prefixes: Vec::new(),
            axioms: IndexSet::new(),
        }
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    /// Namespace of entities minted under this ontology: `<base>#`.
    pub fn namespace(&self) -> String {
        format!("{}#", self.base)
    }

    pub fn prefixes(&self) -> &[(String, String)] {
        &self.prefixes
    }

    pub fn add_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        let prefix = prefix.into();
        if !self.prefixes.iter().any(|(p, _)| *p == prefix) {
            self.prefixes.push((prefix, namespace.into()));
        }
    }

    /// Appends an axiom; returns false if it was already present.
    pub fn push(&mut self, axiom: Axiom) -> bool {
        assert!(axiom.well_formed(), "malformed axiom {axiom:?}");
        self.axioms.insert(axiom)
    }

    pub fn declare(&mut self, kind: EntityKind, iri: &Iri) -> bool {
        self.push(Axiom::Declaration(kind, iri.clone()))
    }

    pub fn extend(&mut self, other: &Ontology) {
        for (p, ns) in &other.prefixes {
            self.add_prefix(p.clone(), ns.clone());
        }
        for a in &other.axioms {
            self.axioms.insert(a.clone());
        }
    }

    pub fn axioms(&self) -> impl ExactSizeIterator<Item = &Axiom> + '_ {
        self.axioms.iter()
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn declared(&self, kind: EntityKind) -> impl Iterator<Item = &Iri> + '_ {
        self.axioms.iter().filter_map(move |a| match a {
            Axiom::Declaration(k, i) if *k == kind => Some(i),
            _ => None,
        })
    }

    /// Entities used by logical axioms without a matching declaration.
    pub fn undeclared(&self) -> BTreeSet<(EntityKind, Iri)> {
        let declared: HashSet<(EntityKind, &Iri)> = self
            .axioms
            .iter()
            .filter_map(|a| match a {
                Axiom::Declaration(k, i) => Some((*k, i)),
                _ => None,
            })
            .collect();
        self.axioms
            .iter()
            .flat_map(Axiom::entities)
            .filter(|(k, i)| !declared.contains(&(*k, i)))
            .collect()
    }

    /// Adds a declaration for every entity used but not declared.
    pub fn declare_used(&mut self) {
        for (k, i) in self.undeclared() {
            self.axioms.insert(Axiom::Declaration(k, i));
        }
    }
}

/// Declarations plus logical axioms, each distinct statement once.
pub fn count_axioms(o: &Ontology) -> usize {
    o.axioms.len()
}

/// An ontology text format.
pub trait Serializer: Send + Sync {
    /// Short name used on the command line (`ttl`, `omn`).
    fn name(&self) -> &'static str;
    fn serialize(&self, o: &Ontology) -> String;
}

/// Serializers known by name.
pub fn serializers() -> Vec<Box<dyn Serializer>> {
    vec![Box::new(Turtle), Box::new(Manchester)]
}

pub fn serializer(name: &str) -> Result<Box<dyn Serializer>, OwlError> {
    serializers()
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| OwlError::UnknownFormat(name.to_string()))
}

pub fn serialize_manchester(o: &Ontology) -> String {
    Manchester.serialize(o)
}

pub fn serialize_turtle(o: &Ontology) -> String {
    Turtle.serialize(o)
}

/// Display name for an IRI relative to an ontology: the decoded local name
/// for entities in the ontology's namespace, `prefix:local` for registered
/// prefixes, the full IRI otherwise.
pub fn short_name(o: &Ontology, iri: &Iri) -> String {
    let ns = o.namespace();
    if let Some(local) = iri.as_str().strip_prefix(ns.as_str()) {
        return decode_local(local);
    }
    for (p, n) in &o.prefixes {
        if let Some(local) = iri.as_str().strip_prefix(n.as_str()) {
            return format!("{p}:{}", decode_local(local));
        }
    }
    iri.to_string()
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Class => "Class",
            EntityKind::ObjectProperty => "ObjectProperty",
            EntityKind::NamedIndividual => "Individual",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Iri {
        Iri::new("http://example.org/g").unwrap()
    }

    #[test]
    fn duplicates_are_suppressed() {
        let mut o = Ontology::new(base());
        let c = Iri::new("http://example.org/g#C").unwrap();
        assert!(o.declare(EntityKind::Class, &c));
        assert!(!o.declare(EntityKind::Class, &c));
        assert_eq!(count_axioms(&o), 1);
        assert_eq!(count_axioms(&Ontology::new(base())), 0);
    }

    #[test]
    fn undeclared_entities() {
        let mut o = Ontology::new(base());
        let c = Iri::new("http://example.org/g#C").unwrap();
        let p = Iri::new("http://example.org/g#R_C").unwrap();
        o.push(Axiom::EquivalentClasses(ClassExpr::named(&c), ClassExpr::HasSelf(p.clone())));
        assert_eq!(o.undeclared().len(), 2);
        o.declare_used();
        assert!(o.undeclared().is_empty());
        assert_eq!(count_axioms(&o), 3);
    }

    #[test]
    #[should_panic(expected = "malformed")]
    fn short_chain_rejected() {
        let mut o = Ontology::new(base());
        let p = Iri::new("http://example.org/g#p").unwrap();
        o.push(Axiom::SubPropertyChainOf {
            chain: vec![PropertyTerm::Named(p.clone())],
            sup: p,
        });
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(serializer("ttl").unwrap().name(), "ttl");
        assert_eq!(serializer("omn").unwrap().name(), "omn");
        assert!(serializer("rdfxml").is_err());
    }
}
