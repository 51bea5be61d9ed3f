use std::collections::{HashMap, HashSet};

use indexmap::IndexSet;

use super::ParseTree;
use crate::grammar::{Grammar, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Item {
    prod: u32,
    dot: u32,
    origin: u32,
}

/// An Earley chart over one token sequence, plus every completed
/// `(variable, start, end)` constituent it found.
pub struct Chart<'g> {
    tokens: Vec<&'g str>,
    by_lhs: HashMap<&'g str, Vec<u32>>,
    completed: HashSet<(&'g str, usize, usize)>,
    active_upto: usize,
}

impl<'g> Chart<'g> {
    /// Runs the recognizer from every variable in `roots` at position 0.
    pub fn build<S: AsRef<str>>(g: &'g Grammar, roots: &[&str], seq: &'g [S]) -> Self {
        let prods = g.productions();
        let mut by_lhs: HashMap<&'g str, Vec<u32>> = HashMap::new();
        for (i, p) in prods.iter().enumerate() {
            by_lhs.entry(p.lhs.as_str()).or_default().push(i as u32);
        }
        let tokens: Vec<&'g str> = seq.iter().map(AsRef::as_ref).collect();
        let n = tokens.len();
        let mut sets: Vec<IndexSet<Item>> = vec![IndexSet::new(); n + 1];
        for r in roots {
            for &prod in by_lhs.get(r).into_iter().flatten() {
                sets[0].insert(Item { prod, dot: 0, origin: 0 });
            }
        }
        let mut completed = HashSet::new();
        let mut active_upto = 0;
        for k in 0..=n {
            if sets[k].is_empty() {
                break;
            }
            active_upto = k;
            let mut idx = 0;
            while idx < sets[k].len() {
                let item = sets[k][idx];
                idx += 1;
                let p = &prods[item.prod as usize];
                match p.rhs.get(item.dot as usize) {
                    None => {
                        // No ε-rules, so origin < k and that set is final.
                        let origin = item.origin as usize;
                        completed.insert((p.lhs.as_str(), origin, k));
                        let waiting: Vec<Item> = sets[origin]
                            .iter()
                            .filter(|w| {
                                matches!(prods[w.prod as usize].rhs.get(w.dot as usize),
                                    Some(Symbol::Variable(v)) if *v == p.lhs)
                            })
                            .copied()
                            .collect();
                        for w in waiting {
                            sets[k].insert(Item { dot: w.dot + 1, ..w });
                        }
                    }
                    Some(Symbol::Variable(v)) => {
                        for &prod in by_lhs.get(v.as_str()).into_iter().flatten() {
                            sets[k].insert(Item {
                                prod,
                                dot: 0,
                                origin: k as u32,
                            });
                        }
                    }
                    Some(Symbol::Terminal(t)) => {
                        if k < n && tokens[k] == t {
                            sets[k + 1].insert(Item {
                                dot: item.dot + 1,
                                ..item
                            });
                        }
                    }
                }
            }
        }
        Chart {
            tokens,
            by_lhs,
            completed,
            active_upto,
        }
    }

    /// Whether `var` was completed over `start..end`.
    pub fn accepts(&self, var: &str, start: usize, end: usize) -> bool {
        self.completed.contains(&(var, start, end))
    }

    /// Largest position the chart reached with live items.
    pub fn frontier(&self) -> usize {
        self.active_upto
    }

    fn holds(&self, s: &Symbol, i: usize, k: usize) -> bool {
        match s {
            Symbol::Terminal(t) => k == i + 1 && self.tokens[i] == t,
            Symbol::Variable(v) => self.accepts(v, i, k),
        }
    }

    fn node(&self, s: &Symbol, g: &Grammar, i: usize, k: usize) -> ParseTree {
        match s {
            Symbol::Terminal(t) => ParseTree::leaf(t.clone(), i),
            Symbol::Variable(v) => self.tree(g, v, i, k).expect("constituent was completed"),
        }
    }

    /// Extracts a tree for `var` over `start..end` from a relaxed-CNF chart.
    pub fn tree(&self, g: &Grammar, var: &str, start: usize, end: usize) -> Option<ParseTree> {
        if !self.accepts(var, start, end) {
            return None;
        }
        let prods = g.productions();
        for &pi in self.by_lhs.get(var).into_iter().flatten() {
            let p = &prods[pi as usize];
            match p.rhs.as_slice() {
                [s @ Symbol::Terminal(_)] if self.holds(s, start, end) => {
                    return Some(ParseTree {
                        label: Symbol::var(var),
                        children: vec![ParseTree::leaf(s.text(), start)],
                        span: start..end,
                    });
                }
                [a, b] => {
                    for split in start + 1..end {
                        if self.holds(a, start, split) && self.holds(b, split, end) {
                            return Some(ParseTree {
                                label: Symbol::var(var),
                                children: vec![self.node(a, g, start, split), self.node(b, g, split, end)],
                                span: start..end,
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        None
    }
}
