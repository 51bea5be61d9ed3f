//! Forward-chaining saturation for the axiom shapes the converter emits.
//!
//! Facts are class memberships `C(x)` and property edges `P(x, y)` over
//! named individuals. Every fact records the axiom and premises that
//! produced it. The rule set:
//!
//! * asserted class and property assertions;
//! * named subclass and equivalence: `C(x) ⇒ D(x)`;
//! * intersections and unions on the left: each disjunct is a conjunction
//!   of named classes whose members all join the right-hand side;
//! * rolification both ways: `C ≡ R some Self` gives `C(x) ⇔ R(x, x)`;
//! * property chains (with inverses): a path along the chain gives the
//!   super-property between its ends;
//! * existentials on the left: `P some F` with `F` named or `owl:Thing`
//!   gives `P(x, y) ∧ F(y) ⇒ C(x)`.
//!
//! Anything else is rejected.

mod report;

use std::collections::HashMap;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

pub use report::{ClassificationReport, ReportRow};

use crate::owl::{Axiom, ClassExpr, Iri, Ontology, PropertyTerm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaterializeError {
    #[error("unsupported axiom: {0}")]
    Unsupported(String),
}

/// Which axioms take part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// Every supported shape.
    Full,
    /// Assertions and `Named SubClassOf: Named` only; everything else is
    /// skipped.
    SubclassOnly,
}

type Id = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum RawFact {
    Member(Id, Id),
    Edge(Id, Id, Id),
}

/// A fact, resolved to IRIs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fact<'a> {
    Member { class: &'a Iri, individual: &'a Iri },
    Edge { property: &'a Iri, subject: &'a Iri, object: &'a Iri },
}

/// Why a fact holds: the axiom (index into [`FactBase::axioms`]) and the
/// earlier facts it was applied to. Asserted facts have no premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub axiom: usize,
    pub premises: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Step {
    property: Id,
    inverse: bool,
}

struct Chain {
    steps: Vec<Step>,
    sup: Id,
    axiom: usize,
}

struct Conjunction {
    body: Vec<Id>,
    head: Id,
    axiom: usize,
}

#[derive(Default)]
struct Rules {
    /// class -> (superclass, axiom)
    subclass: HashMap<Id, Vec<(Id, usize)>>,
    conjunctions: Vec<Conjunction>,
    conjunctions_by_class: HashMap<Id, Vec<usize>>,
    /// class -> (property, axiom): C(x) ⇒ P(x, x)
    self_forward: HashMap<Id, Vec<(Id, usize)>>,
    /// property -> (class, axiom): P(x, x) ⇒ C(x)
    self_backward: HashMap<Id, Vec<(Id, usize)>>,
    /// property -> (filler or None for owl:Thing, head, axiom)
    exists_by_property: HashMap<Id, Vec<(Option<Id>, Id, usize)>>,
    /// filler -> (property, head, axiom)
    exists_by_filler: HashMap<Id, Vec<(Id, Id, usize)>>,
    chains: Vec<Chain>,
    /// property -> (chain, position)
    chain_steps: HashMap<Id, Vec<(usize, usize)>>,
}

/// The saturated fact set.
pub struct FactBase {
    names: IndexSet<Iri>,
    axioms: Vec<Axiom>,
    facts: IndexMap<RawFact, Justification>,
    out_edges: HashMap<(Id, Id), Vec<(Id, usize)>>,
    in_edges: HashMap<(Id, Id), Vec<(Id, usize)>>,
    members: HashMap<Id, Vec<Id>>,
}

/// Saturates the union of `ontologies` under the full rule set.
pub fn materialize(ontologies: &[&Ontology]) -> Result<FactBase, MaterializeError> {
    materialize_with(Profile::Full, ontologies)
}

pub fn materialize_with(profile: Profile, ontologies: &[&Ontology]) -> Result<FactBase, MaterializeError> {
    let mut fb = FactBase {
        names: IndexSet::new(),
        axioms: Vec::new(),
        facts: IndexMap::new(),
        out_edges: HashMap::new(),
        in_edges: HashMap::new(),
        members: HashMap::new(),
    };
    let mut rules = Rules::default();
    let mut asserted = Vec::new();
    for o in ontologies {
        for a in o.axioms() {
            let idx = fb.axioms.len();
            fb.axioms.push(a.clone());
            fb.compile(a, idx, profile, &mut rules, &mut asserted)?;
        }
    }
    for (fact, axiom) in asserted {
        fb.add(fact, axiom, Vec::new());
    }
    fb.saturate(&rules);
    Ok(fb)
}

fn unsupported(a: &Axiom) -> MaterializeError {
    MaterializeError::Unsupported(format!("{a:?}"))
}

impl FactBase {
    fn id(&mut self, iri: &Iri) -> Id {
        match self.names.get_index_of(iri) {
            Some(i) => i as Id,
            None => self.names.insert_full(iri.clone()).0 as Id,
        }
    }

    fn lookup(&self, iri: &Iri) -> Option<Id> {
        self.names.get_index_of(iri).map(|i| i as Id)
    }

    fn name(&self, id: Id) -> &Iri {
        &self.names[id as usize]
    }

    /// Conjunctions of named classes whose union is `e`.
    fn disjuncts(&mut self, e: &ClassExpr) -> Option<Vec<Vec<Id>>> {
        match e {
            ClassExpr::UnionOf(ops) => {
                let mut out = Vec::new();
                for op in ops {
                    out.extend(self.disjuncts(op)?);
                }
                Some(out)
            }
            ClassExpr::IntersectionOf(ops) => {
                let mut body = Vec::new();
                for op in ops {
                    match op {
                        ClassExpr::Named(c) => body.push(self.id(c)),
                        ClassExpr::Thing => {}
                        _ => return None,
                    }
                }
                Some(vec![body])
            }
            ClassExpr::Named(c) => Some(vec![vec![self.id(c)]]),
            _ => None,
        }
    }

    /// Named classes whose intersection is `e` (owl:Thing contributes none).
    fn conjuncts(&mut self, e: &ClassExpr) -> Option<Vec<Id>> {
        match e {
            ClassExpr::Named(c) => Some(vec![self.id(c)]),
            ClassExpr::Thing => Some(vec![]),
            ClassExpr::IntersectionOf(ops) => {
                let mut out = Vec::new();
                for op in ops {
                    out.extend(self.conjuncts(op)?);
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// `sub ⊑ sup`.
    fn compile_inclusion(
        &mut self,
        sub: &ClassExpr,
        sup: &ClassExpr,
        axiom: usize,
        rules: &mut Rules,
    ) -> Option<()> {
        // Right-hand sides: named conjunctions, or a self restriction.
        let heads = match sup {
            ClassExpr::HasSelf(p) => {
                let p = self.id(p);
                let classes = self.conjuncts(sub)?;
                match classes.as_slice() {
                    [c] => rules.self_forward.entry(*c).or_default().push((p, axiom)),
                    _ => return None,
                }
                return Some(());
            }
            _ => self.conjuncts(sup)?,
        };
        match sub {
            ClassExpr::HasSelf(p) => {
                let p = self.id(p);
                for h in heads {
                    rules.self_backward.entry(p).or_default().push((h, axiom));
                }
            }
            ClassExpr::SomeValuesFrom(p, filler) => {
                let p = self.id(p);
                let filler = match filler.as_ref() {
                    ClassExpr::Thing => None,
                    ClassExpr::Named(f) => Some(self.id(f)),
                    _ => return None,
                };
                for h in heads {
                    rules.exists_by_property.entry(p).or_default().push((filler, h, axiom));
                    if let Some(f) = filler {
                        rules.exists_by_filler.entry(f).or_default().push((p, h, axiom));
                    }
                }
            }
            ClassExpr::Thing => return None,
            _ => {
                for body in self.disjuncts(sub)? {
                    for &h in &heads {
                        match body.as_slice() {
                            [] => return None,
                            [c] => rules.subclass.entry(*c).or_default().push((h, axiom)),
                            _ => {
                                let idx = rules.conjunctions.len();
                                for &c in &body {
                                    rules.conjunctions_by_class.entry(c).or_default().push(idx);
                                }
                                rules.conjunctions.push(Conjunction {
                                    body: body.clone(),
                                    head: h,
                                    axiom,
                                });
                            }
                        }
                    }
                }
            }
        }
        Some(())
    }

    fn compile(
        &mut self,
        a: &Axiom,
        axiom: usize,
        profile: Profile,
        rules: &mut Rules,
        asserted: &mut Vec<(RawFact, usize)>,
    ) -> Result<(), MaterializeError> {
        match a {
            Axiom::Declaration(..) => {}
            Axiom::ClassAssertion(c, i) => {
                let i = self.id(i);
                match c {
                    ClassExpr::Named(c) => asserted.push((RawFact::Member(self.id(c), i), axiom)),
                    ClassExpr::Thing => {}
                    _ if profile == Profile::SubclassOnly => {}
                    _ => return Err(unsupported(a)),
                }
            }
            Axiom::ObjectPropertyAssertion {
                property,
                subject,
                object,
            } => {
                let f = RawFact::Edge(self.id(property), self.id(subject), self.id(object));
                asserted.push((f, axiom));
            }
            Axiom::SubClassOf(ClassExpr::Named(sub), ClassExpr::Named(sup))
                if profile == Profile::SubclassOnly =>
            {
                let (sub, sup) = (self.id(sub), self.id(sup));
                rules.subclass.entry(sub).or_default().push((sup, axiom));
            }
            _ if profile == Profile::SubclassOnly => {}
            Axiom::SubClassOf(sub, sup) => {
                self.compile_inclusion(sub, sup, axiom, rules).ok_or_else(|| unsupported(a))?;
            }
            Axiom::EquivalentClasses(x, y) => {
                // Existential or self restrictions only need the direction
                // that derives named facts.
                let left_to_right = match x {
                    ClassExpr::Named(_) => match y {
                        ClassExpr::SomeValuesFrom(..) => None,
                        _ => self.compile_inclusion(x, y, axiom, rules),
                    },
                    _ => self.compile_inclusion(x, y, axiom, rules),
                };
                let right_to_left = match y {
                    ClassExpr::Named(_) => match x {
                        ClassExpr::SomeValuesFrom(..) => None,
                        _ => self.compile_inclusion(y, x, axiom, rules),
                    },
                    _ => self.compile_inclusion(y, x, axiom, rules),
                };
                let one_way_ok = |e: &ClassExpr, other: &ClassExpr| {
                    matches!(e, ClassExpr::Named(_)) && matches!(other, ClassExpr::SomeValuesFrom(..))
                };
                let ok_lr = left_to_right.is_some() || one_way_ok(x, y);
                let ok_rl = right_to_left.is_some() || one_way_ok(y, x);
                if !(ok_lr && ok_rl) {
                    return Err(unsupported(a));
                }
            }
            Axiom::SubPropertyChainOf { chain, sup } => {
                if chain.is_empty() {
                    return Err(unsupported(a));
                }
                let steps: Vec<Step> = chain
                    .iter()
                    .map(|t| Step {
                        property: self.id(t.iri()),
                        inverse: matches!(t, PropertyTerm::Inverse(_)),
                    })
                    .collect();
                let idx = rules.chains.len();
                for (pos, s) in steps.iter().enumerate() {
                    rules.chain_steps.entry(s.property).or_default().push((idx, pos));
                }
                let sup = self.id(sup);
                rules.chains.push(Chain { steps, sup, axiom });
            }
        }
        Ok(())
    }

    fn add(&mut self, fact: RawFact, axiom: usize, premises: Vec<usize>) {
        if self.facts.contains_key(&fact) {
            return;
        }
        let (idx, _) = self.facts.insert_full(fact, Justification { axiom, premises });
        match fact {
            RawFact::Member(c, x) => self.members.entry(x).or_default().push(c),
            RawFact::Edge(p, s, o) => {
                self.out_edges.entry((p, s)).or_default().push((o, idx));
                self.in_edges.entry((p, o)).or_default().push((s, idx));
            }
        }
    }

    fn member_id(&self, c: Id, x: Id) -> Option<usize> {
        self.facts.get_index_of(&RawFact::Member(c, x))
    }

    /// Nodes reachable from `from` along `steps`, each with the edge facts
    /// used. `forward` walks the steps left to right, otherwise right to
    /// left against their direction.
    fn walk(&self, from: Id, steps: &[Step], forward: bool) -> Vec<(Id, Vec<usize>)> {
        let mut frontier = vec![(from, Vec::new())];
        let order: Vec<&Step> = if forward {
            steps.iter().collect()
        } else {
            steps.iter().rev().collect()
        };
        for s in order {
            let mut next = Vec::new();
            // forward along P: out-edges; against P: in-edges; inverse flips
            let use_out = forward != s.inverse;
            let table = if use_out { &self.out_edges } else { &self.in_edges };
            for (node, path) in &frontier {
                for &(other, fid) in table.get(&(s.property, *node)).into_iter().flatten() {
                    let mut p = path.clone();
                    p.push(fid);
                    next.push((other, p));
                }
            }
            frontier = next;
        }
        frontier
    }

    fn saturate(&mut self, rules: &Rules) {
        let mut cursor = 0;
        let mut pending: Vec<(RawFact, usize, Vec<usize>)> = Vec::new();
        while cursor < self.facts.len() {
            let (&fact, _) = self.facts.get_index(cursor).unwrap();
            let me = cursor;
            cursor += 1;
            match fact {
                RawFact::Member(c, x) => {
                    for &(h, ax) in rules.subclass.get(&c).into_iter().flatten() {
                        pending.push((RawFact::Member(h, x), ax, vec![me]));
                    }
                    for &ci in rules.conjunctions_by_class.get(&c).into_iter().flatten() {
                        let conj = &rules.conjunctions[ci];
                        let premises: Option<Vec<usize>> =
                            conj.body.iter().map(|&b| self.member_id(b, x)).collect();
                        if let Some(premises) = premises {
                            pending.push((RawFact::Member(conj.head, x), conj.axiom, premises));
                        }
                    }
                    for &(p, ax) in rules.self_forward.get(&c).into_iter().flatten() {
                        pending.push((RawFact::Edge(p, x, x), ax, vec![me]));
                    }
                    for &(p, h, ax) in rules.exists_by_filler.get(&c).into_iter().flatten() {
                        for &(s, eid) in self.in_edges.get(&(p, x)).into_iter().flatten() {
                            pending.push((RawFact::Member(h, s), ax, vec![eid, me]));
                        }
                    }
                }
                RawFact::Edge(p, s, o) => {
                    if s == o {
                        for &(c, ax) in rules.self_backward.get(&p).into_iter().flatten() {
                            pending.push((RawFact::Member(c, s), ax, vec![me]));
                        }
                    }
                    for &(filler, h, ax) in rules.exists_by_property.get(&p).into_iter().flatten() {
                        match filler {
                            None => pending.push((RawFact::Member(h, s), ax, vec![me])),
                            Some(f) => {
                                if let Some(fid) = self.member_id(f, o) {
                                    pending.push((RawFact::Member(h, s), ax, vec![me, fid]));
                                }
                            }
                        }
                    }
                    for &(ci, pos) in rules.chain_steps.get(&p).into_iter().flatten() {
                        let chain = &rules.chains[ci];
                        let step = chain.steps[pos];
                        let (a, b) = if step.inverse { (o, s) } else { (s, o) };
                        let lefts = self.walk(a, &chain.steps[..pos], false);
                        if lefts.is_empty() {
                            continue;
                        }
                        let rights = self.walk(b, &chain.steps[pos + 1..], true);
                        for (start, lpath) in &lefts {
                            for (end, rpath) in &rights {
                                let mut premises: Vec<usize> = lpath.iter().rev().copied().collect();
                                premises.push(me);
                                premises.extend(rpath);
                                pending.push((RawFact::Edge(chain.sup, *start, *end), chain.axiom, premises));
                            }
                        }
                    }
                }
            }
            for (f, ax, premises) in pending.drain(..) {
                self.add(f, ax, premises);
            }
        }
    }

    fn resolve(&self, f: RawFact) -> Fact<'_> {
        match f {
            RawFact::Member(c, x) => Fact::Member {
                class: self.name(c),
                individual: self.name(x),
            },
            RawFact::Edge(p, s, o) => Fact::Edge {
                property: self.name(p),
                subject: self.name(s),
                object: self.name(o),
            },
        }
    }

    /// Every axiom that took part, in input order.
    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Facts in derivation order; premises always precede conclusions.
    pub fn facts(&self) -> impl Iterator<Item = (Fact<'_>, &Justification)> + '_ {
        self.facts.iter().map(|(f, j)| (self.resolve(*f), j))
    }

    pub fn fact(&self, index: usize) -> Option<(Fact<'_>, &Justification)> {
        self.facts.get_index(index).map(|(f, j)| (self.resolve(*f), j))
    }

    pub fn holds_member(&self, class: &Iri, individual: &Iri) -> bool {
        match (self.lookup(class), self.lookup(individual)) {
            (Some(c), Some(x)) => self.member_id(c, x).is_some(),
            _ => false,
        }
    }

    pub fn holds_edge(&self, property: &Iri, subject: &Iri, object: &Iri) -> bool {
        match (self.lookup(property), self.lookup(subject), self.lookup(object)) {
            (Some(p), Some(s), Some(o)) => self.facts.contains_key(&RawFact::Edge(p, s, o)),
            _ => false,
        }
    }

    /// Classes of `individual` in derivation order.
    pub fn classes_of(&self, individual: &Iri) -> Vec<&Iri> {
        self.lookup(individual)
            .and_then(|x| self.members.get(&x))
            .map(|cs| cs.iter().map(|&c| self.name(c)).collect())
            .unwrap_or_default()
    }
}
