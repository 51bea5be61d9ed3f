//! Seeded random grammars for property tests and oracle cross-checks.

use rand::Rng;

use super::{Grammar, Production, Symbol};

const TERMINALS: [&str; 3] = ["a", "b", "c"];

fn var_name(i: usize) -> String {
    format!("V{i}")
}

/// An arbitrary grammar (no ε) with up to `max_vars` variables and
/// `max_prods` productions whose right-hand sides have 1 to 4 symbols.
/// Every variable has at least one production.
pub fn random_grammar<R: Rng>(rng: &mut R, max_vars: usize, max_prods: usize) -> Grammar {
    let nvars = rng.gen_range(1..=max_vars.max(1));
    let nprods = rng.gen_range(nvars..=max_prods.max(nvars));
    let mut productions = Vec::with_capacity(nprods);
    for i in 0..nprods {
        let lhs = if i < nvars { i } else { rng.gen_range(0..nvars) };
        let len = rng.gen_range(1..=4);
        let rhs = (0..len)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Symbol::Variable(var_name(rng.gen_range(0..nvars)))
                } else {
                    Symbol::term(TERMINALS[rng.gen_range(0..TERMINALS.len())])
                }
            })
            .collect();
        productions.push(Production::new(var_name(lhs), rhs));
    }
    Grammar::new(var_name(0), productions, Vec::new()).expect("generated grammar is well formed")
}

/// A grammar in strict CNF over the terminals `a`, `b`, `c`.
pub fn random_strict_cnf<R: Rng>(rng: &mut R, max_vars: usize, max_prods: usize) -> Grammar {
    let nvars = rng.gen_range(1..=max_vars.max(1));
    let nprods = rng.gen_range(nvars..=max_prods.max(nvars));
    let mut productions = Vec::with_capacity(nprods);
    for i in 0..nprods {
        let lhs = if i < nvars { i } else { rng.gen_range(0..nvars) };
        let rhs = if rng.gen_bool(0.6) {
            vec![
                Symbol::Variable(var_name(rng.gen_range(0..nvars))),
                Symbol::Variable(var_name(rng.gen_range(0..nvars))),
            ]
        } else {
            vec![Symbol::term(TERMINALS[rng.gen_range(0..TERMINALS.len())])]
        };
        productions.push(Production::new(var_name(lhs), rhs));
    }
    Grammar::new(var_name(0), productions, Vec::new()).expect("generated grammar is well formed")
}

/// All token strings over `alphabet` with length in `1..=max_len`.
pub fn all_strings(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for t in alphabet {
                let mut x = w.clone();
                x.push(t.to_string());
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
