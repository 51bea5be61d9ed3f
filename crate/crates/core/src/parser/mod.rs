//! Sequence recognition and parsing.
//!
//! [`recognize`] and [`parse`] run an Earley chart over any ε-free grammar;
//! [`cyk_recognize`] is an independent CYK recognizer for strict CNF kept as
//! a cross-check.

mod cyk;
mod earley;
mod sequence;

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::grammar::{Grammar, Symbol};

pub use cyk::cyk_recognize;
pub use earley::Chart;
pub use sequence::{parse_sequence, SequenceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("sequence is not in the language (longest recognized prefix: {longest_prefix} tokens)")]
    NotInLanguage { longest_prefix: usize },
    #[error("grammar is not in (relaxed) Chomsky Normal Form")]
    NotCnf,
    #[error("`{0}` is not a variable of the grammar")]
    UnknownVariable(String),
}

/// A derivation tree. Leaves carry terminals; inner nodes carry the
/// variable of the production applied. `span` is the half-open token range
/// covered by the node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseTree {
    pub label: Symbol,
    pub children: Vec<ParseTree>,
    pub span: Range<usize>,
}

impl ParseTree {
    pub fn leaf(text: impl Into<String>, position: usize) -> Self {
        ParseTree {
            label: Symbol::Terminal(text.into()),
            children: Vec::new(),
            span: position..position + 1,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Terminal leaves, left to right.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |t: &ParseTree| {
            if t.is_leaf() {
                out.push(t.label.text());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a ParseTree)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    /// Leaves paired with the labels of their ancestors, innermost first.
    pub fn leaf_ancestors(&self) -> Vec<(&str, Vec<&str>)> {
        fn go<'a>(t: &'a ParseTree, path: &mut Vec<&'a str>, out: &mut Vec<(&'a str, Vec<&'a str>)>) {
            if t.is_leaf() {
                out.push((t.label.text(), path.iter().rev().copied().collect()));
                return;
            }
            path.push(t.label.text());
            for c in &t.children {
                go(c, path, out);
            }
            path.pop();
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label.text())?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn unknown_token<'a>(g: &Grammar, seq: &'a [String]) -> Option<&'a str> {
    seq.iter().find(|t| !g.is_terminal(t)).map(String::as_str)
}

/// `seq ∈ L(g)`. Tokens outside the grammar's terminals make the answer
/// false (and are logged).
pub fn recognize(g: &Grammar, seq: &[String]) -> bool {
    if let Some(t) = unknown_token(g, seq) {
        log::warn!("token `{t}` is not a terminal of the grammar");
        return false;
    }
    if seq.is_empty() {
        return false;
    }
    Chart::build(g, &[g.start()], seq).accepts(g.start(), 0, seq.len())
}

/// One parse tree for `seq`, chosen deterministically: at every node the
/// production listed first in the grammar wins, then the leftmost split.
pub fn parse(g: &Grammar, seq: &[String]) -> Result<ParseTree, ParseError> {
    parse_from(g, g.start(), seq)
}

/// As [`parse`], rooted at an arbitrary variable.
pub fn parse_from(g: &Grammar, root: &str, seq: &[String]) -> Result<ParseTree, ParseError> {
    if !g.is_relaxed_cnf() {
        return Err(ParseError::NotCnf);
    }
    if !g.is_variable(root) {
        return Err(ParseError::UnknownVariable(root.to_string()));
    }
    if seq.is_empty() || unknown_token(g, seq).is_some() {
        return Err(ParseError::NotInLanguage { longest_prefix: 0 });
    }
    let chart = Chart::build(g, &[root], seq);
    chart
        .tree(g, root, 0, seq.len())
        .ok_or_else(|| ParseError::NotInLanguage {
            longest_prefix: (1..=seq.len())
                .rev()
                .find(|&k| chart.accepts(root, 0, k))
                .unwrap_or(0),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{enumerate_language, parse_grammar};

    pub(crate) const EXAMPLE_34: &str = r#"
Expression -> Expression_0 Expression | Bit Zero | Bit One | "0" | "1"
Expression_0 -> Expression Plus
Bit -> Bit Zero | Bit One | "0" | "1"
Plus -> "+"
Zero -> "0"
One -> "1"
"#;

    const EXAMPLE_32: &str = r#"
Expression -> Expression "+" Expression | Bit "0" | Bit "1" | "0" | "1"
Bit -> Bit "0" | Bit "1" | "0" | "1"
"#;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn recognizes_sum() {
        let g = parse_grammar(EXAMPLE_32).unwrap();
        assert!(recognize(&g, &toks("1 + 0")));
        assert!(!recognize(&g, &toks("+ +")));
        assert!(!recognize(&g, &toks("1 + 2")));
        assert!(!recognize(&g, &[]));
    }

    #[test]
    fn parse_tree_of_sum() {
        let g = parse_grammar(EXAMPLE_34).unwrap();
        let t = parse(&g, &toks("1 + 0")).unwrap();
        assert_eq!(
            t.to_string(),
            "Expression(Expression_0(Expression(1), Plus(+)), Expression(0))"
        );
        assert_eq!(t.leaves(), ["1", "+", "0"]);
        assert_eq!(t.span, 0..3);
        assert_eq!(t.children[1].span, 2..3);
        assert_eq!(parse(&g, &toks("1")).unwrap().to_string(), "Expression(1)");
    }

    #[test]
    fn parse_failure_reports_prefix() {
        let g = parse_grammar(EXAMPLE_34).unwrap();
        assert_eq!(
            parse(&g, &toks("1 + 0 +")),
            Err(ParseError::NotInLanguage { longest_prefix: 3 })
        );
        assert_eq!(
            parse(&g, &toks("+ 1")),
            Err(ParseError::NotInLanguage { longest_prefix: 0 })
        );
    }

    #[test]
    fn parse_requires_cnf() {
        let g = parse_grammar(EXAMPLE_32).unwrap();
        assert_eq!(parse(&g, &toks("1 + 0")), Err(ParseError::NotCnf));
    }

    #[test]
    fn enumerated_strings_are_recognized() {
        let g = parse_grammar(EXAMPLE_32).unwrap();
        let lang = enumerate_language(&g, 5);
        assert!(!lang.is_empty());
        for w in &lang {
            assert!(recognize(&g, w), "{w:?}");
        }
    }

    #[test]
    fn cyk_agrees_on_example() {
        let g = parse_grammar(EXAMPLE_34).unwrap();
        assert!(cyk_recognize(&g, &toks("1 + 0")));
        assert!(!cyk_recognize(&g, &[]));
        assert!(!cyk_recognize(&g, &toks("1 +")));
    }

    #[test]
    fn leaf_ancestors_innermost_first() {
        let g = parse_grammar(EXAMPLE_34).unwrap();
        let t = parse(&g, &toks("1 + 0")).unwrap();
        let la = t.leaf_ancestors();
        assert_eq!(la[1], ("+", vec!["Plus", "Expression_0", "Expression"]));
    }
}
