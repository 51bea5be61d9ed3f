//! Sequences and parse trees as OWL assertions.

use log::warn;
use thiserror::Error;

use crate::cfg2owl::ConversionConfig;
use crate::grammar::{to_cnf, CnfMode, Grammar};
use crate::owl::{Axiom, ClassExpr, EntityKind, Ontology};
use crate::parser::{Chart, ParseTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AboxError {
    #[error("token {token:?} at position {position} is not a terminal of the grammar")]
    UnknownToken { token: String, position: usize },
}

/// One individual per token, typed with the token's terminal class and
/// linked to its successor by the next property. A sequence of length `n`
/// yields `3n - 1` statements.
pub fn sequence_to_abox(
    seq: &[String],
    g: &Grammar,
    cfg: &ConversionConfig,
) -> Result<Ontology, AboxError> {
    if let Some((position, token)) = seq.iter().enumerate().find(|(_, t)| !g.is_terminal(t)) {
        return Err(AboxError::UnknownToken {
            token: token.clone(),
            position,
        });
    }
    let mut o = Ontology::new(cfg.base.clone());
    for (i, token) in seq.iter().enumerate() {
        let ind = cfg.individual(token, i);
        o.declare(EntityKind::NamedIndividual, &ind);
        o.push(Axiom::ClassAssertion(ClassExpr::named(&cfg.class(token)), ind.clone()));
        if let Some(next_token) = seq.get(i + 1) {
            o.push(Axiom::ObjectPropertyAssertion {
                property: cfg.next.clone(),
                subject: ind,
                object: cfg.individual(next_token, i + 1),
            });
        }
    }
    Ok(o)
}

/// `leaf SubClassOf: ancestor` for every leaf and every variable above it.
pub fn parse_tree_to_axioms(tree: &ParseTree, cfg: &ConversionConfig) -> Ontology {
    let mut o = Ontology::new(cfg.base.clone());
    for (leaf, ancestors) in tree.leaf_ancestors() {
        for a in ancestors {
            o.push(Axiom::SubClassOf(
                ClassExpr::named(&cfg.class(leaf)),
                ClassExpr::named(&cfg.class(a)),
            ));
        }
    }
    o
}

fn shift(tree: &mut ParseTree, offset: usize) {
    tree.span = tree.span.start + offset..tree.span.end + offset;
    for c in &mut tree.children {
        shift(c, offset);
    }
}

/// Splits `seq` into consecutive segments, each parsed by one of `bricks`.
///
/// Left to right, the longest prefix of the remaining input derivable from
/// some brick is taken; among bricks deriving that prefix the one listed
/// first in the grammar wins. A token no brick can start from becomes a
/// bare leaf (and a warning). Non-CNF grammars are normalized (relaxed)
/// first.
pub fn segment_parse(g: &Grammar, bricks: &[String], seq: &[String]) -> Vec<ParseTree> {
    let normalized;
    let g = if g.is_relaxed_cnf() {
        g
    } else {
        normalized = to_cnf(g, CnfMode::Relaxed);
        &normalized
    };
    let mut roots: Vec<&str> = bricks.iter().map(String::as_str).filter(|b| g.is_variable(b)).collect();
    roots.sort_by_key(|b| g.variable_index(b));
    roots.dedup();

    let mut out = Vec::new();
    let mut p = 0;
    while p < seq.len() {
        let rest = &seq[p..];
        let chart = Chart::build(g, &roots, rest);
        let found = (1..=chart.frontier().min(rest.len()))
            .rev()
            .find_map(|end| roots.iter().find(|r| chart.accepts(r, 0, end)).map(|r| (*r, end)));
        match found {
            Some((brick, end)) => {
                let mut tree = chart.tree(g, brick, 0, end).expect("accepted constituent");
                shift(&mut tree, p);
                out.push(tree);
                p += end;
            }
            None => {
                warn!("no brick derives a segment starting at position {p} ({:?})", seq[p]);
                out.push(ParseTree::leaf(seq[p].clone(), p));
                p += 1;
            }
        }
    }
    out
}
