use std::collections::HashSet;

use crate::grammar::{Grammar, Symbol};

/// CYK recognition for a strict-CNF grammar. Used as an oracle for the
/// Earley path; panics if the grammar is not in strict CNF.
pub fn cyk_recognize(g: &Grammar, seq: &[String]) -> bool {
    assert!(g.is_strict_cnf(), "cyk_recognize needs a strict-CNF grammar");
    let n = seq.len();
    if n == 0 {
        return false;
    }
    // table[len - 1][i]: variables deriving seq[i..i + len]
    let mut table: Vec<Vec<HashSet<&str>>> = vec![vec![HashSet::new(); n]; n];
    for (i, tok) in seq.iter().enumerate() {
        for p in g.productions() {
            if p.terminal() == Some(tok.as_str()) {
                table[0][i].insert(&p.lhs);
            }
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let mut cell = HashSet::new();
            for split in 1..len {
                for p in g.productions() {
                    if let [Symbol::Variable(b), Symbol::Variable(c)] = p.rhs.as_slice() {
                        if table[split - 1][i].contains(b.as_str())
                            && table[len - split - 1][i + split].contains(c.as_str())
                        {
                            cell.insert(p.lhs.as_str());
                        }
                    }
                }
            }
            table[len - 1][i] = cell;
        }
    }
    table[n - 1][0].contains(g.start())
}
