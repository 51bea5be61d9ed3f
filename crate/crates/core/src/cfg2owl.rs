//! Grammar to OWL.
//!
//! Every grammar symbol `s` becomes a class `C_s ≡ R_s some Self`. A rule
//! `R -> A B` becomes two property chains that mark the left element of an
//! adjacent `A`,`B` pair with `VariableOne` and the right one with
//! `VariableTwo`, plus the general class inclusion
//! `(A and VariableOne) or (B and VariableTwo) SubClassOf: R`. A rule
//! `R -> t` becomes `t SubClassOf: R`.

use std::collections::HashMap;

use thiserror::Error;

use crate::grammar::{Grammar, Symbol};
use crate::owl::{Axiom, ClassExpr, EntityKind, Iri, Ontology, OwlError, PropertyTerm};

pub const DEFAULT_BASE: &str = "http://example.org/grammar";
pub const VARIABLE_ONE: &str = "VariableOne";
pub const VARIABLE_TWO: &str = "VariableTwo";
pub const ROLE_ONE: &str = "R_1";
pub const ROLE_TWO: &str = "R_2";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConversionError {
    #[error("grammar is not in relaxed Chomsky Normal Form (offending rule: {0})")]
    NotCnf(String),
    #[error("IRI <{0}> would name two different entities")]
    NameClash(String),
    #[error(transparent)]
    Owl(#[from] OwlError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionConfig {
    pub base: Iri,
    /// Functional "directly precedes" property linking sequence elements.
    pub next: Iri,
    /// Emit the `R_B o inverse(next) o R_A` chains. Without them the output
    /// stays inverse-free but nothing is ever classified `VariableTwo`.
    pub include_inverse_chains: bool,
}

impl ConversionConfig {
    pub fn new(base: Iri) -> Self {
        let next = Iri::with_local(&format!("{base}#"), "directlyPrecedes");
        ConversionConfig {
            base,
            next,
            include_inverse_chains: true,
        }
    }

    pub fn with_next(mut self, next: Iri) -> Self {
        self.next = next;
        self
    }

    pub fn namespace(&self) -> String {
        format!("{}#", self.base)
    }

    /// Class of a grammar symbol (terminal or variable).
    pub fn class(&self, symbol_text: &str) -> Iri {
        Iri::with_local(&self.namespace(), symbol_text)
    }

    /// Rolification property of a grammar symbol.
    pub fn role(&self, symbol_text: &str) -> Iri {
        self.role_of_local(&crate::owl::encode_local(symbol_text))
    }

    /// `R_<local>`, except that locals `1` and `2` are written `%31`/`%32`
    /// so they stay apart from the scaffolding properties `R_1`/`R_2`.
    fn role_of_local(&self, local: &str) -> Iri {
        let local = match local {
            "1" => "%31",
            "2" => "%32",
            other => other,
        };
        Iri::new(format!("{}R_{local}", self.namespace())).expect("namespace is absolute")
    }

    /// Rolification property for an arbitrary class IRI: `R_<local name>`
    /// in this configuration's namespace.
    pub fn role_of_class(&self, class: &Iri) -> Iri {
        let s = class.as_str();
        let local = s.strip_prefix(self.namespace().as_str()).unwrap_or_else(|| {
            s.rsplit(['#', '/']).next().filter(|l| !l.is_empty()).unwrap_or(s)
        });
        self.role_of_local(local)
    }

    pub fn variable_one(&self) -> Iri {
        Iri::with_local(&self.namespace(), VARIABLE_ONE)
    }

    pub fn variable_two(&self) -> Iri {
        Iri::with_local(&self.namespace(), VARIABLE_TWO)
    }

    pub fn role_one(&self) -> Iri {
        Iri::with_local(&self.namespace(), ROLE_ONE)
    }

    pub fn role_two(&self) -> Iri {
        Iri::with_local(&self.namespace(), ROLE_TWO)
    }

    /// Individual for the token at `position`: `<token>_<position>`.
    pub fn individual(&self, token: &str, position: usize) -> Iri {
        Iri::with_local(&self.namespace(), &format!("{token}_{position}"))
    }
}

impl Default for ConversionConfig {
    fn default() -> Self {
        ConversionConfig::new(Iri::new(DEFAULT_BASE).unwrap())
    }
}

fn scaffolding(o: &mut Ontology, cfg: &ConversionConfig) {
    let (r1, r2) = (cfg.role_one(), cfg.role_two());
    let (v1, v2) = (cfg.variable_one(), cfg.variable_two());
    o.declare(EntityKind::ObjectProperty, &r1);
    o.declare(EntityKind::ObjectProperty, &r2);
    o.declare(EntityKind::Class, &v1);
    o.push(Axiom::EquivalentClasses(
        ClassExpr::named(&v1),
        ClassExpr::SomeValuesFrom(r1, Box::new(ClassExpr::Thing)),
    ));
    o.declare(EntityKind::Class, &v2);
    o.push(Axiom::EquivalentClasses(
        ClassExpr::named(&v2),
        ClassExpr::SomeValuesFrom(r2, Box::new(ClassExpr::Thing)),
    ));
    o.declare(EntityKind::ObjectProperty, &cfg.next);
}

fn rolify(o: &mut Ontology, class: &Iri, role: &Iri) {
    o.declare(EntityKind::ObjectProperty, role);
    o.declare(EntityKind::Class, class);
    o.push(Axiom::EquivalentClasses(
        ClassExpr::named(class),
        ClassExpr::HasSelf(role.clone()),
    ));
}

/// Chains and general inclusion for "an `a` directly followed by a `b` is
/// part of a `rule`".
fn adjacency_rule(
    o: &mut Ontology,
    cfg: &ConversionConfig,
    (a, role_a): (&Iri, &Iri),
    (b, role_b): (&Iri, &Iri),
    rule: &Iri,
) {
    o.push(Axiom::SubPropertyChainOf {
        chain: vec![
            PropertyTerm::Named(role_a.clone()),
            PropertyTerm::Named(cfg.next.clone()),
            PropertyTerm::Named(role_b.clone()),
        ],
        sup: cfg.role_one(),
    });
    if cfg.include_inverse_chains {
        o.push(Axiom::SubPropertyChainOf {
            chain: vec![
                PropertyTerm::Named(role_b.clone()),
                PropertyTerm::Inverse(cfg.next.clone()),
                PropertyTerm::Named(role_a.clone()),
            ],
            sup: cfg.role_two(),
        });
    }
    o.push(Axiom::SubClassOf(
        ClassExpr::or(vec![
            ClassExpr::and(vec![ClassExpr::named(a), ClassExpr::named(&cfg.variable_one())]),
            ClassExpr::and(vec![ClassExpr::named(b), ClassExpr::named(&cfg.variable_two())]),
        ]),
        ClassExpr::named(rule),
    ));
}

fn check_names(g: &Grammar, cfg: &ConversionConfig) -> Result<(), ConversionError> {
    let mut owner: HashMap<Iri, String> = HashMap::new();
    let mut claim = |iri: Iri, what: String| match owner.get(&iri) {
        Some(prev) if *prev != what => Err(ConversionError::NameClash(iri.to_string())),
        _ => {
            owner.insert(iri, what);
            Ok(())
        }
    };
    claim(cfg.variable_one(), "scaffolding class 1".into())?;
    claim(cfg.variable_two(), "scaffolding class 2".into())?;
    claim(cfg.role_one(), "scaffolding role 1".into())?;
    claim(cfg.role_two(), "scaffolding role 2".into())?;
    claim(cfg.next.clone(), "next".into())?;
    for s in g.variables().chain(g.terminals()) {
        claim(cfg.class(s), format!("class {s}"))?;
        claim(cfg.role(s), format!("role {s}"))?;
    }
    Ok(())
}

/// Converts a relaxed-CNF grammar. Emission order: scaffolding, variables,
/// terminals, then one group per production in grammar order. Linear in
/// `|V| + |Σ| + |R|`. The start symbol plays no part.
pub fn convert(g: &Grammar, cfg: &ConversionConfig) -> Result<Ontology, ConversionError> {
    if let Some(p) = g
        .productions()
        .iter()
        .find(|p| !(p.is_binary() || p.terminal().is_some()))
    {
        return Err(ConversionError::NotCnf(p.to_string()));
    }
    check_names(g, cfg)?;

    let mut o = Ontology::new(cfg.base.clone());
    scaffolding(&mut o, cfg);
    for s in g.variables().chain(g.terminals()) {
        rolify(&mut o, &cfg.class(s), &cfg.role(s));
    }
    for p in g.productions() {
        let lhs = cfg.class(&p.lhs);
        match p.rhs.as_slice() {
            [a, b] => {
                let (ca, ra) = (cfg.class(a.text()), cfg.role(a.text()));
                let (cb, rb) = (cfg.class(b.text()), cfg.role(b.text()));
                adjacency_rule(&mut o, cfg, (&ca, &ra), (&cb, &rb), &lhs);
            }
            [Symbol::Terminal(t)] => {
                o.push(Axiom::SubClassOf(
                    ClassExpr::named(&cfg.class(t)),
                    ClassExpr::named(&lhs),
                ));
            }
            _ => unreachable!("checked above"),
        }
    }
    Ok(o)
}

/// The adjacency pattern for arbitrary classes: an individual of `class_a`
/// directly followed by one of `class_b` makes both members of
/// `rule_class`. Self-contained (repeats the scaffolding and
/// rolifications); merging into a converted grammar adds only what is new.
pub fn make_rule(class_a: &Iri, class_b: &Iri, rule_class: &Iri, cfg: &ConversionConfig) -> Ontology {
    let mut o = Ontology::new(cfg.base.clone());
    scaffolding(&mut o, cfg);
    let (ra, rb) = (cfg.role_of_class(class_a), cfg.role_of_class(class_b));
    rolify(&mut o, class_a, &ra);
    rolify(&mut o, class_b, &rb);
    o.declare(EntityKind::Class, rule_class);
    adjacency_rule(&mut o, cfg, (class_a, &ra), (class_b, &rb), rule_class);
    o
}

/// Exact size of `convert(g)` under the declaration-plus-axiom count:
/// 7 scaffolding statements, 3 per symbol, 2 chain axioms per distinct
/// binary right-hand side (1 without inverse chains), 1 inclusion per
/// production.
pub fn expected_axiom_count(g: &Grammar, cfg: &ConversionConfig) -> usize {
    let symbols = g.num_variables() + g.num_terminals();
    let pairs: std::collections::HashSet<&[Symbol]> = g
        .productions()
        .iter()
        .filter(|p| p.is_binary())
        .map(|p| p.rhs.as_slice())
        .collect();
    let chains_per_pair = if cfg.include_inverse_chains { 2 } else { 1 };
    7 + 3 * symbols + chains_per_pair * pairs.len() + g.productions().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;
    use crate::owl::{count_axioms, serialize_manchester};

    const EXAMPLE_34: &str = r#"
Expression -> Expression_0 Expression | Bit Zero | Bit One | "0" | "1"
Expression_0 -> Expression Plus
Bit -> Bit Zero | Bit One | "0" | "1"
Plus -> "+"
Zero -> "0"
One -> "1"
"#;

    #[test]
    fn binary_rule_shapes() {
        let g = parse_grammar(EXAMPLE_34).unwrap();
        let text = serialize_manchester(&convert(&g, &ConversionConfig::default()).unwrap());
        assert!(text.contains(
            "(Expression_0 and VariableOne) or (Expression and VariableTwo) SubClassOf: Expression"
        ));
        assert!(text.contains("SubPropertyChain: R_Expression_0 o directlyPrecedes o R_Expression"));
        assert!(text.contains("SubPropertyChain: R_Expression o inverse(directlyPrecedes) o R_Expression_0"));
        assert!(text.contains("Class: 1\n    EquivalentTo: R_%31 some Self\n    SubClassOf: Expression\n    SubClassOf: Bit\n    SubClassOf: One\n"), "{text}");
        assert!(text.contains("Class: VariableOne\n    EquivalentTo: R_1 some owl:Thing"));
    }

    #[test]
    fn empty_grammar_gives_scaffolding_only() {
        let g = Grammar::new("S", vec![], vec![]).unwrap();
        let o = convert(&g, &ConversionConfig::default()).unwrap();
        // S itself is a declared variable: 3 statements on top of 7
        assert_eq!(count_axioms(&o), 10);
        assert_eq!(count_axioms(&o), expected_axiom_count(&g, &ConversionConfig::default()));
    }

    #[test]
    fn count_formula_example() {
        let g = parse_grammar(EXAMPLE_34).unwrap();
        let cfg = ConversionConfig::default();
        let o = convert(&g, &cfg).unwrap();
        assert_eq!(count_axioms(&o), expected_axiom_count(&g, &cfg));
        assert!(o.undeclared().is_empty());
        let mut no_inv = cfg.clone();
        no_inv.include_inverse_chains = false;
        let o2 = convert(&g, &no_inv).unwrap();
        assert_eq!(count_axioms(&o2), expected_axiom_count(&g, &no_inv));
        assert!(!serialize_manchester(&o2).contains("inverse("));
    }

    #[test]
    fn rejects_non_cnf_and_clashes() {
        let g = parse_grammar("S -> \"a\" \"b\" \"c\"").unwrap();
        assert!(matches!(
            convert(&g, &ConversionConfig::default()),
            Err(ConversionError::NotCnf(_))
        ));
        let g = parse_grammar("S -> X \"a\"\nX -> \"b\"\nR_1 -> \"c\"").unwrap();
        assert!(matches!(
            convert(&g, &ConversionConfig::default()),
            Err(ConversionError::NameClash(_))
        ));
    }

    #[test]
    fn make_rule_is_idempotent_under_merge() {
        let cfg = ConversionConfig::default();
        let a = Iri::new("http://purl.org/ontology/mto/MajorProgression").unwrap();
        let b = Iri::new("http://purl.org/ontology/mto/MinorProgression").unwrap();
        let x = cfg.class("ModalPassage");
        let r = make_rule(&a, &b, &x, &cfg);
        let mut merged = r.clone();
        merged.extend(&make_rule(&a, &b, &x, &cfg));
        assert_eq!(merged, r);
        assert!(r.undeclared().is_empty());
        assert_eq!(
            cfg.role_of_class(&a).as_str(),
            "http://example.org/grammar#R_MajorProgression"
        );
    }
}
