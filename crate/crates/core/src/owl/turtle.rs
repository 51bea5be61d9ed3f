use std::collections::HashMap;
use std::fmt::Write as _;

use oxrdf::{NamedOrBlankNode, Term, Triple};
use oxttl::TurtleParser;

use super::{Axiom, ClassExpr, EntityKind, Iri, Ontology, OwlError, PropertyTerm, Serializer, OWL, RDF, RDFS, XSD};

/// Turtle with standard OWL vocabulary. Each axiom becomes one statement;
/// anonymous class expressions and inverse properties get blank nodes
/// `_:b0, _:b1, ...` numbered in emission order.
pub struct Turtle;

struct Writer<'a> {
    prefixes: Vec<(&'a str, &'a str)>,
    out: String,
    next_blank: usize,
}

fn is_pn_local(local: &str) -> bool {
    let b = local.as_bytes();
    if b.is_empty() {
        return false;
    }
    let mut i = 0;
    while i < b.len() {
        if b[i].is_ascii_alphanumeric() || b[i] == b'_' {
            i += 1;
        } else if b[i] == b'%' && i + 2 < b.len() {
            if !(b[i + 1].is_ascii_hexdigit() && b[i + 2].is_ascii_hexdigit()) {
                return false;
            }
            i += 3;
        } else {
            return false;
        }
    }
    true
}

impl Writer<'_> {
    fn name(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        for (p, ns) in &self.prefixes {
            if let Some(local) = s.strip_prefix(ns) {
                if is_pn_local(local) {
                    return format!("{p}:{local}");
                }
            }
        }
        format!("<{s}>")
    }

    fn blank(&mut self) -> String {
        let b = format!("_:b{}", self.next_blank);
        self.next_blank += 1;
        b
    }

    fn property(&mut self, t: &PropertyTerm) -> String {
        match t {
            PropertyTerm::Named(p) => self.name(p),
            PropertyTerm::Inverse(p) => {
                let b = self.blank();
                let p = self.name(p);
                writeln!(self.out, "{b} owl:inverseOf {p} .").unwrap();
                b
            }
        }
    }

    /// Writes the description of `e` (if anonymous) and returns its term.
    fn expr(&mut self, e: &ClassExpr) -> String {
        match e {
            ClassExpr::Named(c) => self.name(c),
            ClassExpr::Thing => "owl:Thing".to_string(),
            ClassExpr::HasSelf(p) => {
                let b = self.blank();
                let p = self.name(p);
                writeln!(
                    self.out,
                    "{b} a owl:Restriction ; owl:onProperty {p} ; owl:hasSelf true ."
                )
                .unwrap();
                b
            }
            ClassExpr::SomeValuesFrom(p, f) => {
                let f = self.expr(f);
                let b = self.blank();
                let p = self.name(p);
                writeln!(
                    self.out,
                    "{b} a owl:Restriction ; owl:onProperty {p} ; owl:someValuesFrom {f} ."
                )
                .unwrap();
                b
            }
            ClassExpr::IntersectionOf(ops) | ClassExpr::UnionOf(ops) => {
                let terms: Vec<String> = ops.iter().map(|o| self.expr(o)).collect();
                let b = self.blank();
                let pred = if matches!(e, ClassExpr::UnionOf(_)) {
                    "owl:unionOf"
                } else {
                    "owl:intersectionOf"
                };
                writeln!(self.out, "{b} a owl:Class ; {pred} ( {} ) .", terms.join(" ")).unwrap();
                b
            }
        }
    }

    fn axiom(&mut self, a: &Axiom) {
        match a {
            Axiom::Declaration(kind, iri) => {
                let t = match kind {
                    EntityKind::Class => "owl:Class",
                    EntityKind::ObjectProperty => "owl:ObjectProperty",
                    EntityKind::NamedIndividual => "owl:NamedIndividual",
                };
                let s = self.name(iri);
                writeln!(self.out, "{s} a {t} .").unwrap();
            }
            Axiom::SubClassOf(sub, sup) => {
                let s = self.expr(sub);
                let o = self.expr(sup);
                writeln!(self.out, "{s} rdfs:subClassOf {o} .").unwrap();
            }
            Axiom::EquivalentClasses(a, b) => {
                let s = self.expr(a);
                let o = self.expr(b);
                writeln!(self.out, "{s} owl:equivalentClass {o} .").unwrap();
            }
            Axiom::SubPropertyChainOf { chain, sup } => {
                let terms: Vec<String> = chain.iter().map(|t| self.property(t)).collect();
                let s = self.name(sup);
                writeln!(self.out, "{s} owl:propertyChainAxiom ( {} ) .", terms.join(" ")).unwrap();
            }
            Axiom::ClassAssertion(c, i) => {
                let o = self.expr(c);
                let s = self.name(i);
                writeln!(self.out, "{s} a {o} .").unwrap();
            }
            Axiom::ObjectPropertyAssertion {
                property,
                subject,
                object,
            } => {
                let (s, p, o) = (self.name(subject), self.name(property), self.name(object));
                writeln!(self.out, "{s} {p} {o} .").unwrap();
            }
        }
    }
}

impl Serializer for Turtle {
    fn name(&self) -> &'static str {
        "ttl"
    }

    fn serialize(&self, o: &Ontology) -> String {
        let namespace = o.namespace();
        let mut prefixes: Vec<(&str, &str)> =
            vec![("", namespace.as_str()), ("owl", OWL), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD)];
        for (p, ns) in o.prefixes() {
            prefixes.push((p.as_str(), ns.as_str()));
        }
        let mut w = Writer {
            prefixes: prefixes.clone(),
            out: String::new(),
            next_blank: 0,
        };
        for (p, ns) in &prefixes {
            writeln!(w.out, "@prefix {p}: <{ns}> .").unwrap();
        }
        writeln!(w.out).unwrap();
        writeln!(w.out, "<{}> a owl:Ontology .", o.base()).unwrap();
        writeln!(w.out).unwrap();
        for a in o.axioms() {
            w.axiom(a);
        }
        w.out
    }
}

fn owl(local: &str) -> String {
    format!("{OWL}{local}")
}

struct Graph {
    by_subject: HashMap<String, Vec<(String, Term)>>,
}

fn node_key(n: &NamedOrBlankNode) -> String {
    match n {
        NamedOrBlankNode::NamedNode(i) => i.as_str().to_string(),
        NamedOrBlankNode::BlankNode(b) => format!("_:{}", b.as_str()),
    }
}

fn term_key(t: &Term) -> Option<String> {
    match t {
        Term::NamedNode(i) => Some(i.as_str().to_string()),
        Term::BlankNode(b) => Some(format!("_:{}", b.as_str())),
        _ => None,
    }
}

impl Graph {
    fn objects(&self, node: &str, pred: &str) -> Vec<&Term> {
        self.by_subject
            .get(node)
            .into_iter()
            .flatten()
            .filter(|(p, _)| p == pred)
            .map(|(_, o)| o)
            .collect()
    }

    fn one(&self, node: &str, pred: &str) -> Option<&Term> {
        self.objects(node, pred).into_iter().next()
    }

    fn list(&self, head: &Term) -> Result<Vec<Term>, OwlError> {
        let mut items = Vec::new();
        let mut cur = head.clone();
        let nil = format!("{RDF}nil");
        loop {
            let key = term_key(&cur).ok_or_else(|| OwlError::Unsupported("literal in list".into()))?;
            if key == nil {
                return Ok(items);
            }
            let first = self
                .one(&key, &format!("{RDF}first"))
                .ok_or_else(|| OwlError::Unsupported(format!("malformed list at {key}")))?;
            items.push(first.clone());
            cur = self
                .one(&key, &format!("{RDF}rest"))
                .ok_or_else(|| OwlError::Unsupported(format!("malformed list at {key}")))?
                .clone();
        }
    }

    fn iri(t: &Term) -> Result<Iri, OwlError> {
        match t {
            Term::NamedNode(n) => Iri::new(n.as_str()),
            other => Err(OwlError::Unsupported(format!("expected an IRI, found {other}"))),
        }
    }

    fn class(&self, t: &Term) -> Result<ClassExpr, OwlError> {
        if let Term::NamedNode(n) = t {
            return Ok(if n.as_str() == owl("Thing") {
                ClassExpr::Thing
            } else {
                ClassExpr::Named(Iri::new(n.as_str())?)
            });
        }
        let key = term_key(t).ok_or_else(|| OwlError::Unsupported(format!("literal class {t}")))?;
        if let Some(p) = self.one(&key, &owl("onProperty")) {
            let p = Self::iri(p)?;
            if let Some(flag) = self.one(&key, &owl("hasSelf")) {
                return match flag {
                    Term::Literal(l) if l.value() == "true" => Ok(ClassExpr::HasSelf(p)),
                    other => Err(OwlError::Unsupported(format!("hasSelf {other}"))),
                };
            }
            if let Some(f) = self.one(&key, &owl("someValuesFrom")) {
                return Ok(ClassExpr::SomeValuesFrom(p, Box::new(self.class(f)?)));
            }
            return Err(OwlError::Unsupported(format!("restriction {key}")));
        }
        for (pred, union) in [("unionOf", true), ("intersectionOf", false)] {
            if let Some(head) = self.one(&key, &owl(pred)) {
                let ops = self
                    .list(head)?
                    .iter()
                    .map(|o| self.class(o))
                    .collect::<Result<Vec<_>, _>>()?;
                if ops.len() < 2 {
                    return Err(OwlError::Unsupported(format!("{pred} with fewer than two operands")));
                }
                return Ok(if union {
                    ClassExpr::UnionOf(ops)
                } else {
                    ClassExpr::IntersectionOf(ops)
                });
            }
        }
        Err(OwlError::Unsupported(format!("class expression {key}")))
    }

    fn property(&self, t: &Term) -> Result<PropertyTerm, OwlError> {
        match t {
            Term::NamedNode(n) => Ok(PropertyTerm::Named(Iri::new(n.as_str())?)),
            Term::BlankNode(_) => {
                let key = term_key(t).unwrap();
                let inner = self
                    .one(&key, &owl("inverseOf"))
                    .ok_or_else(|| OwlError::Unsupported(format!("property expression {key}")))?;
                Ok(PropertyTerm::Inverse(Self::iri(inner)?))
            }
            other => Err(OwlError::Unsupported(format!("property {other}"))),
        }
    }
}

/// Reads Turtle back into axioms. Understands what [`Turtle`] writes plus
/// plain `rdfs:subClassOf` alignment files. The ontology IRI (`a
/// owl:Ontology`) becomes the base when present, `default_base` otherwise.
pub fn read_turtle(text: &str, default_base: &Iri) -> Result<Ontology, OwlError> {
    let mut triples: Vec<Triple> = Vec::new();
    let mut parser = TurtleParser::new().for_slice(text.as_bytes());
    for t in parser.by_ref() {
        triples.push(t.map_err(|e| OwlError::Turtle(e.to_string()))?);
    }
    let declared_prefixes: Vec<(String, String)> = parser
        .prefixes()
        .map(|(p, ns)| (p.to_string(), ns.to_string()))
        .collect();

    let mut graph = Graph {
        by_subject: HashMap::new(),
    };
    for t in &triples {
        graph
            .by_subject
            .entry(node_key(&t.subject))
            .or_default()
            .push((t.predicate.as_str().to_string(), t.object.clone()));
    }

    let rdf_type = format!("{RDF}type");
    let sub_class = format!("{RDFS}subClassOf");
    let equivalent = owl("equivalentClass");
    let chain = owl("propertyChainAxiom");

    let base = triples
        .iter()
        .find(|t| t.predicate.as_str() == rdf_type && matches!(&t.object, Term::NamedNode(n) if n.as_str() == owl("Ontology")))
        .and_then(|t| match &t.subject {
            NamedOrBlankNode::NamedNode(n) => Iri::new(n.as_str()).ok(),
            _ => None,
        })
        .unwrap_or_else(|| default_base.clone());
    let mut o = Ontology::new(base);
    let own_namespace = o.namespace();
    for (p, ns) in declared_prefixes {
        if !p.is_empty() && ![OWL, RDF, RDFS, XSD].contains(&ns.as_str()) && ns != own_namespace {
            o.add_prefix(p, ns);
        }
    }

    for t in &triples {
        let pred = t.predicate.as_str();
        let subject_term: Term = t.subject.clone().into();
        if pred == sub_class {
            o.push(Axiom::SubClassOf(graph.class(&subject_term)?, graph.class(&t.object)?));
            continue;
        }
        if pred == equivalent {
            o.push(Axiom::EquivalentClasses(graph.class(&subject_term)?, graph.class(&t.object)?));
            continue;
        }
        let NamedOrBlankNode::NamedNode(subject) = &t.subject else {
            continue; // blank-node descriptions are consumed above
        };
        let subject = Iri::new(subject.as_str())?;
        if pred == rdf_type {
            let kind = match &t.object {
                Term::NamedNode(n) if n.as_str() == owl("Class") => Some(EntityKind::Class),
                Term::NamedNode(n) if n.as_str() == owl("ObjectProperty") => Some(EntityKind::ObjectProperty),
                Term::NamedNode(n) if n.as_str() == owl("NamedIndividual") => Some(EntityKind::NamedIndividual),
                Term::NamedNode(n) if n.as_str() == owl("Ontology") => continue,
                _ => None,
            };
            match kind {
                Some(k) => o.push(Axiom::Declaration(k, subject)),
                None => o.push(Axiom::ClassAssertion(graph.class(&t.object)?, subject)),
            };
        } else if pred == chain {
            let members = graph
                .list(&t.object)?
                .iter()
                .map(|m| graph.property(m))
                .collect::<Result<Vec<_>, _>>()?;
            if members.len() < 2 {
                return Err(OwlError::Unsupported("property chain shorter than two".into()));
            }
            o.push(Axiom::SubPropertyChainOf {
                chain: members,
                sup: subject,
            });
        } else {
            match &t.object {
                Term::NamedNode(obj) => {
                    o.push(Axiom::ObjectPropertyAssertion {
                        property: Iri::new(pred)?,
                        subject,
                        object: Iri::new(obj.as_str())?,
                    });
                }
                other => {
                    return Err(OwlError::Unsupported(format!(
                        "statement <{subject}> <{pred}> {other}"
                    )))
                }
            }
        }
    }
    Ok(o)
}
