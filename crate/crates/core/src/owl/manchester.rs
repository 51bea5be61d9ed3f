use std::fmt::Write as _;

use indexmap::IndexMap;

use super::{Axiom, ClassExpr, EntityKind, Iri, Ontology, PropertyTerm, Serializer, OWL, RDF, RDFS, XSD};

/// Manchester syntax: one frame per entity in first-emission order, then
/// general class axioms (complex left-hand sides) in emission order.
pub struct Manchester;

struct Names<'a> {
    namespace: String,
    prefixes: Vec<(&'a str, &'a str)>,
}

impl Names<'_> {
    fn name(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        if let Some(local) = s.strip_prefix(self.namespace.as_str()) {
            if is_plain(local) {
                return local.to_string();
            }
        }
        for (p, ns) in &self.prefixes {
            if let Some(local) = s.strip_prefix(ns) {
                if is_plain(local) {
                    return format!("{p}:{local}");
                }
            }
        }
        format!("<{s}>")
    }

    fn property(&self, t: &PropertyTerm) -> String {
        match t {
            PropertyTerm::Named(p) => self.name(p),
            PropertyTerm::Inverse(p) => format!("inverse({})", self.name(p)),
        }
    }

    fn expr(&self, e: &ClassExpr) -> String {
        match e {
            ClassExpr::Named(c) => self.name(c),
            ClassExpr::Thing => "owl:Thing".to_string(),
            ClassExpr::HasSelf(p) => format!("{} some Self", self.name(p)),
            ClassExpr::SomeValuesFrom(p, f) => format!("{} some {}", self.name(p), self.operand(f)),
            ClassExpr::IntersectionOf(ops) => self.join(ops, " and "),
            ClassExpr::UnionOf(ops) => self.join(ops, " or "),
        }
    }

    fn operand(&self, e: &ClassExpr) -> String {
        match e {
            ClassExpr::Named(_) | ClassExpr::Thing => self.expr(e),
            _ => format!("({})", self.expr(e)),
        }
    }

    fn join(&self, ops: &[ClassExpr], sep: &str) -> String {
        ops.iter().map(|o| self.operand(o)).collect::<Vec<_>>().join(sep)
    }
}

fn is_plain(local: &str) -> bool {
    !local.is_empty()
        && local
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'%' | b'.' | b'-' | b'~'))
}

impl Serializer for Manchester {
    fn name(&self) -> &'static str {
        "omn"
    }

    fn serialize(&self, o: &Ontology) -> String {
        let namespace = o.namespace();
        let mut prefixes: Vec<(&str, &str)> = vec![("owl", OWL), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD)];
        for (p, ns) in o.prefixes() {
            prefixes.push((p.as_str(), ns.as_str()));
        }
        let names = Names {
            namespace: namespace.clone(),
            prefixes: prefixes.clone(),
        };

        let mut frames: IndexMap<(EntityKind, &Iri), Vec<String>> = IndexMap::new();
        let mut general: Vec<String> = Vec::new();
        for a in o.axioms() {
            match a {
                Axiom::Declaration(kind, iri) => {
                    frames.entry((*kind, iri)).or_default();
                }
                Axiom::EquivalentClasses(ClassExpr::Named(c), e) => frames
                    .entry((EntityKind::Class, c))
                    .or_default()
                    .push(format!("EquivalentTo: {}", names.expr(e))),
                Axiom::SubClassOf(ClassExpr::Named(c), e) => frames
                    .entry((EntityKind::Class, c))
                    .or_default()
                    .push(format!("SubClassOf: {}", names.expr(e))),
                Axiom::SubClassOf(sub, sup) => {
                    general.push(format!("{} SubClassOf: {}", names.expr(sub), names.expr(sup)))
                }
                Axiom::EquivalentClasses(a, b) => {
                    general.push(format!("EquivalentClasses: {}, {}", names.expr(a), names.expr(b)))
                }
                Axiom::SubPropertyChainOf { chain, sup } => {
                    let chain: Vec<String> = chain.iter().map(|t| names.property(t)).collect();
                    frames
                        .entry((EntityKind::ObjectProperty, sup))
                        .or_default()
                        .push(format!("SubPropertyChain: {}", chain.join(" o ")));
                }
                Axiom::ClassAssertion(c, i) => frames
                    .entry((EntityKind::NamedIndividual, i))
                    .or_default()
                    .push(format!("Types: {}", names.expr(c))),
                Axiom::ObjectPropertyAssertion {
                    property,
                    subject,
                    object,
                } => frames
                    .entry((EntityKind::NamedIndividual, subject))
                    .or_default()
                    .push(format!("Facts: {} {}", names.name(property), names.name(object))),
            }
        }

        let mut out = String::new();
        writeln!(out, "Prefix: : <{namespace}>").unwrap();
        for (p, ns) in &prefixes {
            writeln!(out, "Prefix: {p}: <{ns}>").unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "Ontology: <{}>", o.base()).unwrap();
        for ((kind, iri), lines) in &frames {
            writeln!(out).unwrap();
            writeln!(out, "{kind}: {}", names.name(iri)).unwrap();
            for l in lines {
                writeln!(out, "    {l}").unwrap();
            }
        }
        if !general.is_empty() {
            writeln!(out).unwrap();
            for g in &general {
                writeln!(out, "{g}").unwrap();
            }
        }
        out
    }
}
