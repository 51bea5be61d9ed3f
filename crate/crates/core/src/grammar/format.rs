//! Line-oriented grammar file format.
//!
//! ```text
//! # comment
//! start: Expression
//! bricks: A, B
//! Expression -> Expression "+" Expression | Bit "0"
//!             | "0" | "1"
//! ```

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use super::{is_identifier, Grammar, GrammarError, Production, Symbol};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Arrow,
    Bar,
    Colon,
    Comma,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex_line(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, GrammarError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '#' => break,
            '|' => {
                out.push((Tok::Bar, col));
                i += 1;
            }
            ':' => {
                out.push((Tok::Colon, col));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, col));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, col));
                i += 2;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(line, col, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => {
                                s.push(e);
                                i += 2;
                            }
                            _ => return Err(syntax(line, i + 1, "invalid escape")),
                        },
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                if s.is_empty() {
                    return Err(syntax(line, col, "empty terminal"));
                }
                out.push((Tok::Quoted(s), col));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let begin = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[begin..i].iter().collect();
                if !is_identifier(&word) {
                    return Err(syntax(line, col, format!("invalid identifier `{word}`")));
                }
                out.push((Tok::Ident(word), col));
            }
            other => return Err(syntax(line, col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct RawRule {
    lhs: String,
    alternatives: Vec<Vec<(Tok, usize)>>,
    line: usize,
}

/// Parses the grammar text format. The start symbol is the `start:`
/// directive or, failing that, the first rule's left-hand side.
pub fn parse_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut rules: Vec<RawRule> = Vec::new();
    let mut start: Option<String> = None;
    let mut bricks: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = lex_line(raw, line)?;
        let Some((first, col)) = toks.first().cloned() else {
            continue;
        };
        match first {
            Tok::Bar => {
                let rule = rules
                    .last_mut()
                    .ok_or_else(|| syntax(line, col, "continuation line without a rule"))?;
                split_alternatives(&toks[1..], line, col, &mut rule.alternatives)?;
            }
            Tok::Ident(word) => match toks.get(1) {
                Some((Tok::Colon, _)) if word == "start" || word == "bricks" => {
                    let names = directive_names(&toks[2..], line)?;
                    if word == "start" {
                        if names.len() != 1 {
                            return Err(syntax(line, col, "start: expects exactly one variable"));
                        }
                        start = names.into_iter().next();
                    } else {
                        bricks.extend(names);
                    }
                }
                Some((Tok::Arrow, acol)) => {
                    let mut alternatives = Vec::new();
                    split_alternatives(&toks[2..], line, *acol, &mut alternatives)?;
                    rules.push(RawRule {
                        lhs: word,
                        alternatives,
                        line,
                    });
                }
                Some((_, c)) => return Err(syntax(line, *c, "expected `->`")),
                None => return Err(syntax(line, col + word.len(), "expected `->`")),
            },
            _ => return Err(syntax(line, col, "expected a rule or directive")),
        }
    }

    if rules.is_empty() {
        // A bare `start:` directive declares a grammar without productions.
        return match start {
            Some(s) if bricks.is_empty() => Grammar::new(s, Vec::new(), Vec::new()),
            _ => Err(GrammarError::Empty),
        };
    }

    let defined: HashSet<&str> = rules.iter().map(|r| r.lhs.as_str()).collect();
    let mut productions = Vec::new();
    for rule in &rules {
        for alt in &rule.alternatives {
            let mut rhs = Vec::with_capacity(alt.len());
            for (tok, _) in alt {
                match tok {
                    Tok::Ident(v) => {
                        if !defined.contains(v.as_str()) {
                            return Err(GrammarError::UndeclaredVariable {
                                name: v.clone(),
                                line: rule.line,
                            });
                        }
                        rhs.push(Symbol::Variable(v.clone()));
                    }
                    Tok::Quoted(t) => rhs.push(Symbol::Terminal(t.clone())),
                    _ => unreachable!("filtered by split_alternatives"),
                }
            }
            productions.push(Production::new(rule.lhs.clone(), rhs));
        }
    }
    let start = start.unwrap_or_else(|| rules[0].lhs.clone());
    if !defined.contains(start.as_str()) {
        return Err(GrammarError::StartNotVariable(start));
    }
    Grammar::new(start, productions, bricks)
}

fn split_alternatives(
    toks: &[(Tok, usize)],
    line: usize,
    col: usize,
    out: &mut Vec<Vec<(Tok, usize)>>,
) -> Result<(), GrammarError> {
    let mut current = Vec::new();
    let mut last_col = col;
    for (tok, c) in toks {
        last_col = *c;
        match tok {
            Tok::Bar => {
                if current.is_empty() {
                    return Err(syntax(line, *c, "empty alternative"));
                }
                out.push(std::mem::take(&mut current));
            }
            Tok::Ident(_) | Tok::Quoted(_) => current.push((tok.clone(), *c)),
            _ => return Err(syntax(line, *c, "unexpected token in right-hand side")),
        }
    }
    if current.is_empty() {
        return Err(syntax(line, last_col, "empty alternative"));
    }
    out.push(current);
    Ok(())
}

fn directive_names(toks: &[(Tok, usize)], line: usize) -> Result<Vec<String>, GrammarError> {
    let mut names = Vec::new();
    for (tok, c) in toks {
        match tok {
            Tok::Ident(name) => names.push(name.clone()),
            Tok::Comma => {}
            _ => return Err(syntax(line, *c, "expected a variable name")),
        }
    }
    Ok(names)
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, text: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in text.chars() {
        if c == '"' || c == '\\' {
            f.write_char('\\')?;
        }
        f.write_char(c)?;
    }
    f.write_char('"')
}

/// Renders a grammar in the text format, one line per left-hand side in
/// first-appearance order. `parse_grammar(write_grammar(g))` rebuilds `g`
/// (modulo dropped duplicates).
pub fn write_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    writeln!(out, "start: {}", g.start()).unwrap();
    if !g.bricks().is_empty() {
        writeln!(out, "bricks: {}", g.bricks().join(", ")).unwrap();
    }
    let mut order: Vec<&str> = Vec::new();
    for p in g.productions() {
        if !order.contains(&p.lhs.as_str()) {
            order.push(&p.lhs);
        }
    }
    for lhs in order {
        out.push_str(lhs);
        out.push_str(" ->");
        for (i, p) in g.productions_of(lhs).enumerate() {
            if i > 0 {
                out.push_str(" |");
            }
            for s in &p.rhs {
                out.push(' ');
                match s {
                    Symbol::Variable(v) => out.push_str(v),
                    Symbol::Terminal(t) => write_quoted(&mut out, t).unwrap(),
                }
            }
        }
        out.push('\n');
    }
    out
}
