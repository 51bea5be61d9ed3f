//! Classification strategies, selectable by name.

use std::borrow::Cow;
use std::collections::HashSet;

use thiserror::Error;

use crate::abox::{parse_tree_to_axioms, segment_parse, sequence_to_abox, AboxError};
use crate::cfg2owl::{convert, ConversionConfig, ConversionError};
use crate::grammar::{to_cnf, CnfMode, Grammar};
use crate::materializer::{materialize, materialize_with, ClassificationReport, FactBase, MaterializeError, Profile};
use crate::owl::{count_axioms, Axiom, ClassExpr, EntityKind, Iri, Ontology};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("unknown classification mode {0:?} (expected dl or hybrid)")]
    UnknownMode(String),
    #[error("brick {0:?} is not a variable of the grammar")]
    UnknownBrick(String),
    #[error(transparent)]
    Conversion(#[from] ConversionError),
    #[error(transparent)]
    Abox(#[from] AboxError),
    #[error(transparent)]
    Materialize(#[from] MaterializeError),
}

pub struct Request<'a> {
    pub grammar: &'a Grammar,
    pub sequence: &'a [String],
    /// Hybrid only. Defaults to the grammar's bricks, else its start symbol.
    pub bricks: Option<&'a [String]>,
    pub alignments: &'a [Ontology],
    pub config: &'a ConversionConfig,
    pub include_scaffolding: bool,
}

impl<'a> Request<'a> {
    pub fn new(grammar: &'a Grammar, sequence: &'a [String], config: &'a ConversionConfig) -> Self {
        Request {
            grammar,
            sequence,
            bricks: None,
            alignments: &[],
            config,
            include_scaffolding: true,
        }
    }
}

/// Statement counts of the inputs to saturation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AxiomCounts {
    pub tbox: usize,
    pub abox: usize,
    pub alignment: usize,
}

impl AxiomCounts {
    pub fn total(&self) -> usize {
        self.tbox + self.abox + self.alignment
    }
}

pub struct Classification {
    pub report: ClassificationReport,
    pub counts: AxiomCounts,
    pub facts: FactBase,
}

pub trait Classifier: Send + Sync {
    fn name(&self) -> &'static str;
    fn classify(&self, req: &Request) -> Result<Classification, ClassifyError>;
}

/// Converts the whole grammar and saturates it with the sequence ABox.
pub struct Dl;

/// Parses the sequence into brick segments and saturates only the subclass
/// axioms read off the parse trees.
pub struct Hybrid;

impl Classifier for Dl {
    fn name(&self) -> &'static str {
        "dl"
    }

    fn classify(&self, req: &Request) -> Result<Classification, ClassifyError> {
        classify_dl(req)
    }
}

impl Classifier for Hybrid {
    fn name(&self) -> &'static str {
        "hybrid"
    }

    fn classify(&self, req: &Request) -> Result<Classification, ClassifyError> {
        classify_hybrid(req)
    }
}

pub fn classifiers() -> Vec<Box<dyn Classifier>> {
    vec![Box::new(Dl), Box::new(Hybrid)]
}

pub fn classifier(name: &str) -> Result<Box<dyn Classifier>, ClassifyError> {
    classifiers()
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| ClassifyError::UnknownMode(name.to_string()))
}

fn relaxed(g: &Grammar) -> Cow<'_, Grammar> {
    if g.is_relaxed_cnf() {
        Cow::Borrowed(g)
    } else {
        Cow::Owned(to_cnf(g, CnfMode::Relaxed))
    }
}

/// Declared classes of `parts`, and an ontology carrying their prefixes
/// for display names.
fn naming<'o>(base: &Iri, parts: &[&'o Ontology]) -> (HashSet<&'o Iri>, Ontology) {
    let mut names = Ontology::new(base.clone());
    let mut declared = HashSet::new();
    for o in parts {
        declared.extend(o.declared(EntityKind::Class));
        for (p, ns) in o.prefixes() {
            names.add_prefix(p.clone(), ns.clone());
        }
    }
    (declared, names)
}

fn alignment_count(req: &Request) -> usize {
    req.alignments.iter().map(count_axioms).sum()
}

pub fn classify_dl(req: &Request) -> Result<Classification, ClassifyError> {
    let g = relaxed(req.grammar);
    let cfg = req.config;
    let tbox = convert(&g, cfg)?;
    let abox = sequence_to_abox(req.sequence, &g, cfg)?;
    let mut parts = vec![&tbox, &abox];
    parts.extend(req.alignments);
    let facts = materialize(&parts)?;
    let (declared, names) = naming(&cfg.base, &parts);
    let report = ClassificationReport::build(
        "dl",
        req.sequence,
        cfg,
        &facts,
        &declared,
        &names,
        req.include_scaffolding,
    );
    let counts = AxiomCounts {
        tbox: count_axioms(&tbox),
        abox: count_axioms(&abox),
        alignment: alignment_count(req),
    };
    Ok(Classification { report, counts, facts })
}

/// Subclass-only TBox of the hybrid mode: symbol declarations, terminal
/// rules, and the leaf-to-ancestor axioms of every segment.
fn hybrid_tbox(g: &Grammar, req: &Request) -> Result<(Ontology, Vec<String>), ClassifyError> {
    let cfg = req.config;
    let bricks: Vec<String> = match req.bricks {
        Some(b) => b.to_vec(),
        None if !g.bricks().is_empty() => g.bricks().to_vec(),
        None => vec![g.start().to_string()],
    };
    if let Some(b) = bricks.iter().find(|b| !g.is_variable(b)) {
        return Err(ClassifyError::UnknownBrick(b.clone()));
    }
    let mut tbox = Ontology::new(cfg.base.clone());
    for s in g.variables().chain(g.terminals()) {
        tbox.declare(EntityKind::Class, &cfg.class(s));
    }
    for p in g.productions() {
        if let Some(t) = p.terminal() {
            tbox.push(Axiom::SubClassOf(
                ClassExpr::named(&cfg.class(t)),
                ClassExpr::named(&cfg.class(&p.lhs)),
            ));
        }
    }
    let mut warnings = Vec::new();
    for tree in segment_parse(g, &bricks, req.sequence) {
        if tree.is_leaf() {
            warnings.push(format!(
                "position {}: no brick derives a segment starting at {:?}",
                tree.span.start,
                tree.label.text()
            ));
        }
        tbox.extend(&parse_tree_to_axioms(&tree, cfg));
    }
    Ok((tbox, warnings))
}

pub fn classify_hybrid(req: &Request) -> Result<Classification, ClassifyError> {
    let g = relaxed(req.grammar);
    let cfg = req.config;
    let (tbox, warnings) = hybrid_tbox(&g, req)?;
    let abox = sequence_to_abox(req.sequence, &g, cfg)?;
    let mut parts = vec![&tbox, &abox];
    parts.extend(req.alignments);
    let facts = materialize_with(Profile::SubclassOnly, &parts)?;
    let (declared, names) = naming(&cfg.base, &parts);
    let mut report = ClassificationReport::build(
        "hybrid",
        req.sequence,
        cfg,
        &facts,
        &declared,
        &names,
        req.include_scaffolding,
    );
    report.warnings = warnings;
    let counts = AxiomCounts {
        tbox: count_axioms(&tbox),
        abox: count_axioms(&abox),
        alignment: alignment_count(req),
    };
    Ok(Classification { report, counts, facts })
}
