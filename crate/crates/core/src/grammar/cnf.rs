use std::collections::{HashMap, HashSet, VecDeque};
use std::str::FromStr;

use super::{Grammar, Production, Symbol};

/// Target normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnfMode {
    /// `A -> B C` with `B, C` variables, or `A -> t`.
    Strict,
    /// `A -> X Y` with `X, Y` variables or terminals, or `A -> t`.
    Relaxed,
}

impl FromStr for CnfMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(CnfMode::Strict),
            "relaxed" => Ok(CnfMode::Relaxed),
            other => Err(format!("unknown normal form `{other}` (expected strict|relaxed)")),
        }
    }
}

struct Names {
    used: HashSet<String>,
}

impl Names {
    fn new(g: &Grammar) -> Self {
        Names {
            used: g.variables().chain(g.terminals()).map(String::from).collect(),
        }
    }

    /// `<base>_<k>` with the smallest unused `k`.
    fn fresh(&mut self, base: &str) -> String {
        let name = (0..)
            .map(|k| format!("{base}_{k}"))
            .find(|n| !self.used.contains(n))
            .unwrap();
        self.used.insert(name.clone());
        name
    }

    fn claim(&mut self, preferred: String) -> String {
        if self.used.insert(preferred.clone()) {
            preferred
        } else {
            self.fresh(&preferred)
        }
    }
}

fn wrapper_base(t: &str) -> String {
    const DIGITS: [&str; 10] = [
        "Zero", "One", "Two", "Three", "Four", "Five", "Six", "Seven", "Eight", "Nine",
    ];
    let mut chars = t.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if let Some(d) = c.to_digit(10) {
            return DIGITS[d as usize].to_string();
        }
        let named = match c {
            '+' => Some("Plus"),
            '-' => Some("Minus"),
            '*' => Some("Star"),
            '/' => Some("Slash"),
            '=' => Some("Equals"),
            '(' => Some("LParen"),
            ')' => Some("RParen"),
            '.' => Some("Dot"),
            ',' => Some("Comma"),
            ';' => Some("Semicolon"),
            _ => None,
        };
        if let Some(n) = named {
            return n.to_string();
        }
    }
    let body: String = t
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("T_{body}")
}

fn binarize(productions: &[Production], names: &mut Names) -> Vec<Production> {
    let mut out = Vec::with_capacity(productions.len());
    for p in productions {
        if p.rhs.len() <= 2 {
            out.push(p.clone());
            continue;
        }
        // X -> s0 s1 ... sn  =>  X -> X_a sn, X_a -> X_b s(n-1), ..., X_z -> s0 s1
        let mut head = p.lhs.clone();
        let mut rest = p.rhs.as_slice();
        while rest.len() > 2 {
            let (last, prefix) = rest.split_last().unwrap();
            let fresh = names.fresh(&p.lhs);
            out.push(Production::new(
                head,
                vec![Symbol::Variable(fresh.clone()), last.clone()],
            ));
            head = fresh;
            rest = prefix;
        }
        out.push(Production::new(head, rest.to_vec()));
    }
    out
}

fn unit_target(p: &Production) -> Option<&str> {
    match p.rhs.as_slice() {
        [Symbol::Variable(v)] => Some(v),
        _ => None,
    }
}

fn eliminate_units(productions: Vec<Production>) -> Vec<Production> {
    let mut by_lhs: HashMap<&str, Vec<&Production>> = HashMap::new();
    for p in &productions {
        by_lhs.entry(&p.lhs).or_default().push(p);
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for p in &productions {
        let Some(target) = unit_target(p) else {
            if seen.insert(p.clone()) {
                out.push(p.clone());
            }
            continue;
        };
        let mut visited: HashSet<&str> = HashSet::new();
        let mut queue = VecDeque::from([target]);
        while let Some(c) = queue.pop_front() {
            if !visited.insert(c) {
                continue;
            }
            for q in by_lhs.get(c).into_iter().flatten() {
                match unit_target(q) {
                    Some(next) => queue.push_back(next),
                    None => {
                        let np = Production::new(p.lhs.clone(), q.rhs.clone());
                        if seen.insert(np.clone()) {
                            out.push(np);
                        }
                    }
                }
            }
        }
    }
    out
}

fn isolate_terminals(productions: Vec<Production>, names: &mut Names) -> Vec<Production> {
    let mut wrappers: HashMap<String, String> = HashMap::new();
    let mut appended = Vec::new();
    let mut out = Vec::with_capacity(productions.len());
    for mut p in productions {
        if p.rhs.len() == 2 {
            for s in p.rhs.iter_mut() {
                if let Symbol::Terminal(t) = s {
                    let name = wrappers
                        .entry(t.clone())
                        .or_insert_with(|| {
                            let name = names.claim(wrapper_base(t));
                            appended.push(Production::new(name.clone(), vec![Symbol::term(t.clone())]));
                            name
                        })
                        .clone();
                    *s = Symbol::Variable(name);
                }
            }
        }
        out.push(p);
    }
    out.extend(appended);
    out
}

fn prune(g: &Grammar, productions: Vec<Production>) -> Grammar {
    let probe = Grammar::new(g.start(), productions, Vec::new()).expect("normalization keeps symbols valid");
    let productive = probe.productive_variables();
    let kept: Vec<Production> = probe
        .productions()
        .iter()
        .filter(|p| {
            productive.contains(p.lhs.as_str())
                && p.rhs.iter().all(|s| match s {
                    Symbol::Variable(v) => productive.contains(v.as_str()),
                    Symbol::Terminal(_) => true,
                })
        })
        .cloned()
        .collect();
    let bricks: Vec<String> = g
        .bricks()
        .iter()
        .filter(|b| {
            let ok = productive.contains(b.as_str());
            if !ok {
                log::warn!("brick `{b}` is unproductive and was dropped");
            }
            ok
        })
        .cloned()
        .collect();
    let trimmed = Grammar::new(g.start(), kept, bricks.clone()).expect("valid");
    let reachable = trimmed.reachable_symbols();
    let (kept, dropped): (Vec<Production>, Vec<Production>) = trimmed
        .productions()
        .iter()
        .cloned()
        .partition(|p| reachable.contains(&Symbol::var(p.lhs.clone())));
    let removed = probe.productions().len() - kept.len();
    if removed > 0 {
        log::warn!(
            "pruned {removed} production(s) with unreachable or unproductive symbols ({} unreachable)",
            dropped.len()
        );
    }
    Grammar::new(g.start(), kept, bricks).expect("valid")
}

/// Normalizes to Chomsky Normal Form without changing the language.
///
/// Long right-hand sides are split into left-nested binary rules with fresh
/// variables `<lhs>_<k>`; unit rules are inlined; in strict mode terminals in
/// binary rules are moved into wrapper variables (`Plus -> "+"`). Unreachable
/// and unproductive symbols are pruned (bricks count as roots).
pub fn to_cnf(g: &Grammar, mode: CnfMode) -> Grammar {
    let mut names = Names::new(g);
    let mut productions = binarize(g.productions(), &mut names);
    productions = eliminate_units(productions);
    if mode == CnfMode::Strict {
        productions = isolate_terminals(productions, &mut names);
    }
    prune(g, productions)
}
