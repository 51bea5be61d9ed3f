//! Loading inputs and running a classification mode end to end.

use std::path::Path;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cfg2owl::ConversionConfig;
use crate::classify::{classifier, AxiomCounts, Classification, ClassifyError, Request};
use crate::grammar::{parse_grammar, Grammar, GrammarError};
use crate::owl::{read_turtle, Ontology, OwlError};
use crate::parser::{parse_sequence, SequenceError};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Grammar { path: String, source: GrammarError },
    #[error("{path}: {source}")]
    Sequence { path: String, source: SequenceError },
    #[error("{path}: {source}")]
    Alignment { path: String, source: OwlError },
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_grammar(path: &Path) -> Result<Grammar, LoadError> {
    parse_grammar(&read(path)?).map_err(|source| LoadError::Grammar {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_sequence(path: &Path) -> Result<Vec<String>, LoadError> {
    parse_sequence(&read(path)?).map_err(|source| LoadError::Sequence {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a Turtle alignment and declares every entity it uses, so that
/// classes it introduces show up in reports.
pub fn alignment_from_turtle(text: &str, cfg: &ConversionConfig) -> Result<Ontology, OwlError> {
    let mut o = read_turtle(text, &cfg.base)?;
    o.declare_used();
    Ok(o)
}

pub fn load_alignment(path: &Path, cfg: &ConversionConfig) -> Result<Ontology, LoadError> {
    alignment_from_turtle(&read(path)?, cfg).map_err(|source| LoadError::Alignment {
        path: path.display().to_string(),
        source,
    })
}

pub struct ModeResult {
    pub mode: String,
    pub classification: Classification,
    pub elapsed: Duration,
}

impl ModeResult {
    pub fn counts(&self) -> AxiomCounts {
        self.classification.counts
    }
}

pub struct Pipeline {
    pub grammar: Grammar,
    pub sequence: Vec<String>,
    pub bricks: Option<Vec<String>>,
    pub alignments: Vec<Ontology>,
    pub config: ConversionConfig,
    pub include_scaffolding: bool,
}

impl Pipeline {
    pub fn new(grammar: Grammar, sequence: Vec<String>) -> Self {
        Pipeline {
            grammar,
            sequence,
            bricks: None,
            alignments: Vec::new(),
            config: ConversionConfig::default(),
            include_scaffolding: true,
        }
    }

    pub fn request(&self) -> Request<'_> {
        Request {
            grammar: &self.grammar,
            sequence: &self.sequence,
            bricks: self.bricks.as_deref(),
            alignments: &self.alignments,
            config: &self.config,
            include_scaffolding: self.include_scaffolding,
        }
    }

    /// Runs the classifier registered as `mode`, timing the whole
    /// conversion-plus-saturation.
    pub fn run(&self, mode: &str) -> Result<ModeResult, ClassifyError> {
        let c = classifier(mode)?;
        let req = self.request();
        let start = Instant::now();
        let classification = c.classify(&req)?;
        Ok(ModeResult {
            mode: c.name().to_string(),
            classification,
            elapsed: start.elapsed(),
        })
    }
}
