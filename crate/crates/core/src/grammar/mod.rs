//! Context-free grammars: the data model, the text format, validation and
//! normalization to Chomsky Normal Form.

mod cnf;
mod format;
pub mod random;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

pub use cnf::{to_cnf, CnfMode};
pub use format::{parse_grammar, write_grammar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("empty grammar")]
    Empty,
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: variable `{name}` is used but never defined")]
    UndeclaredVariable { name: String, line: usize },
    #[error("`{0}` is used both as a terminal and as a variable")]
    KindClash(String),
    #[error("start symbol `{0}` is not a variable of the grammar")]
    StartNotVariable(String),
    #[error("brick `{0}` is not a variable of the grammar")]
    UnknownBrick(String),
    #[error("invalid variable identifier `{0}`")]
    BadIdentifier(String),
    #[error("empty terminal")]
    EmptyTerminal,
    #[error("production for `{0}` has an empty right-hand side")]
    EmptyRhs(String),
}

/// A grammar symbol. Terminals carry their verbatim surface text (for
/// example `C:min7`), variables an identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Variable(String),
    Terminal(String),
}

impl Symbol {
    pub fn var(name: impl Into<String>) -> Self {
        Symbol::Variable(name.into())
    }

    pub fn term(text: impl Into<String>) -> Self {
        Symbol::Terminal(text.into())
    }

    pub fn text(&self) -> &str {
        match self {
            Symbol::Variable(s) | Symbol::Terminal(s) => s,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Symbol::Terminal(_))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Symbol::Variable(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Variable(v) => f.write_str(v),
            Symbol::Terminal(t) => format::write_quoted(f, t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Production {
    pub lhs: String,
    pub rhs: Vec<Symbol>,
}

impl Production {
    pub fn new(lhs: impl Into<String>, rhs: Vec<Symbol>) -> Self {
        Production {
            lhs: lhs.into(),
            rhs,
        }
    }

    /// `R -> A B` with `A, B` drawn from variables or terminals.
    pub fn is_binary(&self) -> bool {
        self.rhs.len() == 2
    }

    /// `R -> t`.
    pub fn terminal(&self) -> Option<&str> {
        match self.rhs.as_slice() {
            [Symbol::Terminal(t)] => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// `G = (V, Σ, R, S)` plus the optional brick variables used to cover whole
/// sequences by concatenation.
///
/// Variables and terminals are kept in first-appearance order (start symbol
/// first) so every downstream emission is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    variables: IndexSet<String>,
    terminals: IndexSet<String>,
    productions: Vec<Production>,
    start: String,
    bricks: Vec<String>,
    duplicates: Vec<Production>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Grammar {
    /// Builds a grammar from productions. Identical productions are collapsed
    /// (the dropped copies are kept for [`validate`]).
    pub fn new(
        start: impl Into<String>,
        productions: Vec<Production>,
        bricks: Vec<String>,
    ) -> Result<Self, GrammarError> {
        let start = start.into();
        let mut variables = IndexSet::new();
        let mut terminals = IndexSet::new();
        variables.insert(start.clone());
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(productions.len());
        let mut duplicates = Vec::new();
        for p in productions {
            if !is_identifier(&p.lhs) {
                return Err(GrammarError::BadIdentifier(p.lhs));
            }
            if p.rhs.is_empty() {
                return Err(GrammarError::EmptyRhs(p.lhs));
            }
            variables.insert(p.lhs.clone());
            for s in &p.rhs {
                match s {
                    Symbol::Variable(v) => {
                        if !is_identifier(v) {
                            return Err(GrammarError::BadIdentifier(v.clone()));
                        }
                        variables.insert(v.clone());
                    }
                    Symbol::Terminal(t) => {
                        if t.is_empty() {
                            return Err(GrammarError::EmptyTerminal);
                        }
                        terminals.insert(t.clone());
                    }
                }
            }
            if seen.insert(p.clone()) {
                kept.push(p);
            } else {
                log::warn!("duplicate production dropped: {p}");
                duplicates.push(p);
            }
        }
        if let Some(t) = terminals.iter().find(|t| variables.contains(*t)) {
            return Err(GrammarError::KindClash(t.clone()));
        }
        if !is_identifier(&start) {
            return Err(GrammarError::StartNotVariable(start));
        }
        for b in &bricks {
            if !variables.contains(b) {
                return Err(GrammarError::UnknownBrick(b.clone()));
            }
        }
        Ok(Grammar {
            variables,
            terminals,
            productions: kept,
            start,
            bricks,
            duplicates,
        })
    }

    pub fn variables(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.variables.iter().map(String::as_str)
    }

    pub fn terminals(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.terminals.iter().map(String::as_str)
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_terminals(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_variable(&self, name: &str) -> bool {
        self.variables.contains(name)
    }

    pub fn is_terminal(&self, text: &str) -> bool {
        self.terminals.contains(text)
    }

    /// Position of a variable in first-appearance order.
    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.get_index_of(name)
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn bricks(&self) -> &[String] {
        &self.bricks
    }

    /// Productions dropped as exact duplicates when the grammar was built.
    pub fn duplicates(&self) -> &[Production] {
        &self.duplicates
    }

    pub fn with_bricks(mut self, bricks: Vec<String>) -> Result<Self, GrammarError> {
        for b in &bricks {
            if !self.variables.contains(b) {
                return Err(GrammarError::UnknownBrick(b.clone()));
            }
        }
        self.bricks = bricks;
        Ok(self)
    }

    pub fn with_start(self, start: impl Into<String>) -> Result<Self, GrammarError> {
        let start = start.into();
        if !self.variables.contains(&start) {
            return Err(GrammarError::StartNotVariable(start));
        }
        Grammar::new(start, self.productions, self.bricks)
    }

    pub fn productions_of<'a>(&'a self, lhs: &'a str) -> impl Iterator<Item = &'a Production> + 'a {
        self.productions.iter().filter(move |p| p.lhs == lhs)
    }

    /// Every production is `A -> X Y` (X, Y variables or terminals) or `A -> t`.
    pub fn is_relaxed_cnf(&self) -> bool {
        self.productions
            .iter()
            .all(|p| p.is_binary() || p.terminal().is_some())
    }

    /// Every production is `A -> B C` (B, C variables) or `A -> t`.
    pub fn is_strict_cnf(&self) -> bool {
        self.productions.iter().all(|p| {
            p.terminal().is_some() || (p.is_binary() && p.rhs.iter().all(Symbol::is_variable))
        })
    }

    /// Variables that derive at least one terminal string.
    pub fn productive_variables(&self) -> HashSet<&str> {
        let mut productive: HashSet<&str> = HashSet::new();
        loop {
            let before = productive.len();
            for p in &self.productions {
                if productive.contains(p.lhs.as_str()) {
                    continue;
                }
                let ok = p.rhs.iter().all(|s| match s {
                    Symbol::Terminal(_) => true,
                    Symbol::Variable(v) => productive.contains(v.as_str()),
                });
                if ok {
                    productive.insert(&p.lhs);
                }
            }
            if productive.len() == before {
                return productive;
            }
        }
    }

    /// Symbols reachable from the start symbol or any brick.
    pub fn reachable_symbols(&self) -> HashSet<Symbol> {
        let mut by_lhs: HashMap<&str, Vec<&Production>> = HashMap::new();
        for p in &self.productions {
            by_lhs.entry(&p.lhs).or_default().push(p);
        }
        let mut seen = HashSet::new();
        let mut stack: Vec<String> = std::iter::once(self.start.clone())
            .chain(self.bricks.iter().cloned())
            .collect();
        while let Some(v) = stack.pop() {
            if !seen.insert(Symbol::Variable(v.clone())) {
                continue;
            }
            for p in by_lhs.get(v.as_str()).into_iter().flatten() {
                for s in &p.rhs {
                    match s {
                        Symbol::Variable(w) => stack.push(w.clone()),
                        t => {
                            seen.insert(t.clone());
                        }
                    }
                }
            }
        }
        seen
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn warning(message: String) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message,
        }
    }

    fn error(message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Structural checks that do not prevent building a grammar.
pub fn validate(g: &Grammar) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if !g.variables.contains(&g.start) {
        out.push(Diagnostic::error(format!(
            "start symbol `{}` is not a variable",
            g.start
        )));
    }
    for p in &g.duplicates {
        out.push(Diagnostic::warning(format!("duplicate production `{p}`")));
    }
    let reachable = g.reachable_symbols();
    for v in g.variables() {
        if !reachable.contains(&Symbol::var(v)) {
            out.push(Diagnostic::warning(format!("unreachable variable `{v}`")));
        }
    }
    for t in g.terminals() {
        if !reachable.contains(&Symbol::term(t)) {
            out.push(Diagnostic::warning(format!("unreachable terminal \"{t}\"")));
        }
    }
    if !g.productive_variables().contains(g.start()) {
        out.push(Diagnostic::error(format!(
            "unproductive start: `{}` derives no terminal string",
            g.start
        )));
    }
    out
}

/// Every token sequence of length at most `max_len` derivable from the start
/// symbol. Exhaustive; meant as a test oracle for small grammars
/// (`max_len <= 12`).
pub fn enumerate_language(g: &Grammar, max_len: usize) -> BTreeSet<Vec<String>> {
    if max_len == 0 {
        return BTreeSet::new();
    }
    let mut lang: HashMap<&str, BTreeSet<Vec<String>>> = HashMap::new();
    loop {
        let mut changed = false;
        for p in &g.productions {
            let mut partial: BTreeSet<Vec<String>> = BTreeSet::from([Vec::new()]);
            for s in &p.rhs {
                let choices: Vec<Vec<String>> = match s {
                    Symbol::Terminal(t) => vec![vec![t.clone()]],
                    Symbol::Variable(v) => match lang.get(v.as_str()) {
                        Some(set) => set.iter().cloned().collect(),
                        None => Vec::new(),
                    },
                };
                let mut next = BTreeSet::new();
                for prefix in &partial {
                    for c in &choices {
                        if prefix.len() + c.len() <= max_len {
                            let mut w = prefix.clone();
                            w.extend(c.iter().cloned());
                            next.insert(w);
                        }
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            let entry = lang.entry(p.lhs.as_str()).or_default();
            for w in partial {
                changed |= entry.insert(w);
            }
        }
        if !changed {
            break;
        }
    }
    lang.remove(g.start()).unwrap_or_default()
}
