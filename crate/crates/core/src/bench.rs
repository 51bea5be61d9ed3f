//! Grammar-growth benchmark.
//!
//! Each iteration adds `step` fresh variables with 1 to 10 alternatives
//! each. An alternative is a binary rule over symbols introduced by growth
//! (with probability 0.8) or a fresh terminal. Growth never touches the
//! original symbols, so classification of the benchmark sequence must not
//! change while the ontology keeps growing.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cfg2owl::ConversionConfig;
use crate::classify::{classifier, Classification, ClassifyError, Request};
use crate::grammar::{Grammar, Production, Symbol};

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthConfig {
    pub seed: u64,
    pub iterations: usize,
    /// Fresh variables per iteration.
    pub step: usize,
    pub max_alternatives: usize,
    pub binary_probability: f64,
    /// Timed runs per mode and iteration (after one discarded warm-up).
    pub repeats: usize,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            seed: 0,
            iterations: 20,
            step: 5,
            max_alternatives: 10,
            binary_probability: 0.8,
            repeats: 5,
        }
    }
}

/// Grows a grammar iteration by iteration, remembering which symbols it
/// introduced.
pub struct Grower {
    config: GrowthConfig,
    pool: Vec<Symbol>,
    iteration: usize,
}

impl Grower {
    pub fn new(config: GrowthConfig) -> Self {
        Grower {
            config,
            pool: Vec::new(),
            iteration: 0,
        }
    }

    /// Symbols introduced so far.
    pub fn introduced(&self) -> &[Symbol] {
        &self.pool
    }

    fn fresh(taken: &HashSet<String>, base: String) -> String {
        let mut name = base.clone();
        let mut k = 0;
        while taken.contains(&name) {
            k += 1;
            name = format!("{base}x{k}");
        }
        name
    }

    /// `g` plus one iteration's worth of productions.
    pub fn step(&mut self, g: &Grammar) -> Grammar {
        self.iteration += 1;
        let it = self.iteration;
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(it as u64);

        let mut taken: HashSet<String> = g.variables().chain(g.terminals()).map(String::from).collect();
        let mut fresh_vars = Vec::with_capacity(self.config.step);
        for j in 0..self.config.step {
            let v = Self::fresh(&taken, format!("Grow{it}_{j}"));
            taken.insert(v.clone());
            fresh_vars.push(v.clone());
            self.pool.push(Symbol::Variable(v));
        }

        let mut productions = g.productions().to_vec();
        for (j, v) in fresh_vars.iter().enumerate() {
            let alternatives = rng.gen_range(1..=self.config.max_alternatives.max(1));
            for m in 0..alternatives {
                let rhs = if rng.gen_bool(self.config.binary_probability) {
                    let a = self.pool[rng.gen_range(0..self.pool.len())].clone();
                    let b = self.pool[rng.gen_range(0..self.pool.len())].clone();
                    vec![a, b]
                } else {
                    let t = Self::fresh(&taken, format!("grow{it}.{j}.{m}"));
                    taken.insert(t.clone());
                    self.pool.push(Symbol::Terminal(t.clone()));
                    vec![Symbol::Terminal(t)]
                };
                productions.push(Production::new(v.clone(), rhs));
            }
        }
        Grammar::new(g.start(), productions, g.bricks().to_vec()).expect("growth keeps the grammar well formed")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub iteration: usize,
    pub productions_total: usize,
    pub axioms_total: usize,
    pub dl_time_ms: f64,
    pub hybrid_time_ms: f64,
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

fn timed(mode: &str, req: &Request, repeats: usize) -> Result<(Classification, Duration), ClassifyError> {
    let c = classifier(mode)?;
    let mut last = c.classify(req)?;
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        last = c.classify(req)?;
        times.push(start.elapsed());
    }
    Ok((last, median(times)))
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

/// Runs both modes on the baseline and after every growth iteration.
/// `observe` sees each iteration's grammar and the DL and hybrid results.
pub fn run_bench_with(
    g: &Grammar,
    seq: &[String],
    conversion: &ConversionConfig,
    growth: &GrowthConfig,
    mut observe: impl FnMut(usize, &Grammar, &Classification, &Classification),
) -> Result<Vec<BenchRow>, ClassifyError> {
    let mut grower = Grower::new(growth.clone());
    let mut grammar = g.clone();
    let mut rows = Vec::with_capacity(growth.iterations + 1);
    for iteration in 0..=growth.iterations {
        if iteration > 0 {
            grammar = grower.step(&grammar);
        }
        let req = Request::new(&grammar, seq, conversion);
        let (dl, dl_time) = timed("dl", &req, growth.repeats)?;
        let (hybrid, hybrid_time) = timed("hybrid", &req, growth.repeats)?;
        log::info!(
            "iteration {iteration}: {} productions, dl {:?}, hybrid {:?}",
            grammar.productions().len(),
            dl_time,
            hybrid_time
        );
        rows.push(BenchRow {
            iteration,
            productions_total: grammar.productions().len(),
            axioms_total: dl.counts.tbox + dl.counts.abox,
            dl_time_ms: ms(dl_time),
            hybrid_time_ms: ms(hybrid_time),
        });
        observe(iteration, &grammar, &dl, &hybrid);
    }
    Ok(rows)
}

pub fn run_bench(
    g: &Grammar,
    seq: &[String],
    conversion: &ConversionConfig,
    growth: &GrowthConfig,
) -> Result<Vec<BenchRow>, ClassifyError> {
    run_bench_with(g, seq, conversion, growth, |_, _, _, _| {})
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("row serializes");
    }
    if rows.is_empty() {
        w.write_record(["iteration", "productions_total", "axioms_total", "dl_time_ms", "hybrid_time_ms"])
            .expect("header");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

/// Coefficient of determination of the least-squares line through
/// `(xs, ys)`. A constant `ys` is fitted exactly and gives 1.
pub fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if syy == 0.0 {
        return 1.0;
    }
    if sxx == 0.0 {
        return 0.0;
    }
    let slope = sxy / sxx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (my + slope * (x - mx))).powi(2))
        .sum();
    1.0 - ss_res / syy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    #[test]
    fn growth_is_seeded_and_isolated() {
        let g = parse_grammar("S -> A B\nA -> \"a\"\nB -> \"b\"").unwrap();
        let cfg = GrowthConfig::default();
        let grow = |g: &Grammar| {
            let mut gr = Grower::new(cfg.clone());
            let g1 = gr.step(g);
            gr.step(&g1)
        };
        let (x, y) = (grow(&g), grow(&g));
        assert_eq!(x, y);
        let original: HashSet<&str> = g.variables().chain(g.terminals()).collect();
        for p in &x.productions()[g.productions().len()..] {
            assert!(!original.contains(p.lhs.as_str()));
            assert!(p.rhs.iter().all(|s| !original.contains(s.text())));
        }
        let fresh = x.variables().filter(|v| v.starts_with("Grow")).count();
        assert_eq!(fresh, 10);
    }

    #[test]
    fn r_squared_basics() {
        assert!((r_squared(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 1.0).abs() < 1e-12);
        assert!(r_squared(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0, 0.0, 1.0]) < 0.5);
    }

    #[test]
    fn zero_iterations_is_baseline_only() {
        let g = parse_grammar("S -> A B\nA -> \"a\"\nB -> \"b\"").unwrap();
        let seq = vec!["a".to_string(), "b".to_string()];
        let growth = GrowthConfig {
            iterations: 0,
            repeats: 1,
            ..GrowthConfig::default()
        };
        let rows = run_bench(&g, &seq, &ConversionConfig::default(), &growth).unwrap();
        assert_eq!(rows.len(), 1);
        let csv = to_csv(&rows);
        assert!(csv.starts_with("iteration,productions_total,axioms_total,dl_time_ms,hybrid_time_ms\n0,3,"));
    }
}
