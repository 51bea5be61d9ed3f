//! Acceptance checks, one line per criterion.
//!
//! Built without the libtest harness so that every line is printed; the
//! process exits non-zero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cfgowl::abox::sequence_to_abox;
use cfgowl::bench::{r_squared, run_bench_with, GrowthConfig};
use cfgowl::cfg2owl::{convert, ConversionConfig};
use cfgowl::classify::{Classification, Request};
use cfgowl::grammar::random::{all_strings, random_grammar, random_strict_cnf};
use cfgowl::grammar::{enumerate_language, to_cnf, CnfMode, Grammar};
use cfgowl::materializer::Fact;
use cfgowl::owl::{count_axioms, serializers, Axiom, ClassExpr, PropertyTerm};
use cfgowl::parser::{cyk_recognize, parse, recognize};
use cfgowl::pipeline::Pipeline;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn blue_bossa(mode: &str, align: bool) -> cfgowl::pipeline::ModeResult {
    let mut p = Pipeline::new(grammar("bluebossa.cfg"), sequence("bluebossa.seq"));
    if align {
        p.alignments.push(alignment("mto_align.ttl"));
    }
    p.run(mode).unwrap()
}

fn without_scaffolding(s: &BTreeSet<String>) -> BTreeSet<String> {
    s.iter().filter(|c| !SCAFFOLDING.contains(&c.as_str())).cloned().collect()
}

fn blue_bossa_dl_classes() -> Outcome {
    let start = Instant::now();
    let r = blue_bossa("dl", false);
    let elapsed = start.elapsed();
    let expected = blue_bossa_expected();
    let got = report_sets(&r.classification.report);
    ensure(got.len() == 11, || format!("{} rows", got.len()))?;
    for (i, ((token, want), have)) in expected.iter().zip(&got).enumerate() {
        ensure(r.classification.report.rows[i].token == *token, || format!("token {i}"))?;
        ensure(want == have, || format!("position {i} ({token}): expected {want:?}, got {have:?}"))?;
    }
    let oracle = naive_classes(&grammar("bluebossa.cfg"), &sequence("bluebossa.seq"), &[], &[]);
    ensure(oracle == got, || "naive rule iteration disagrees".into())?;
    ensure(elapsed.as_secs_f64() < 5.0, || format!("took {elapsed:?}"))?;
    Ok(format!("11/11 positions match, {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn hybrid_bold_and_containment() -> Outcome {
    let dl = report_sets(&blue_bossa("dl", false).classification.report);
    let hybrid = report_sets(&blue_bossa("hybrid", false).classification.report);
    for i in 0..11 {
        let bold = BLUE_BOSSA_BOLD[i];
        ensure(hybrid[i].contains(bold), || format!("position {i} lacks {bold}: {:?}", hybrid[i]))?;
        let (h, d) = (without_scaffolding(&hybrid[i]), without_scaffolding(&dl[i]));
        ensure(h.is_subset(&d), || format!("position {i}: {:?} not within {:?}", h, d))?;
    }
    let dropped: usize = (0..11).map(|i| without_scaffolding(&dl[i]).len() - without_scaffolding(&hybrid[i]).len()).sum();
    Ok(format!("bold class everywhere, hybrid within DL ({dropped} DL-only memberships)"))
}

fn progression_types() -> Outcome {
    let r = blue_bossa("dl", true);
    let mut got = Vec::new();
    for row in &r.classification.report.rows {
        let minor = row.classes.iter().any(|c| c == "mto:MinorProgression");
        let major = row.classes.iter().any(|c| c == "mto:MajorProgression");
        got.push(match (minor, major) {
            (true, false) => "Minor",
            (false, true) => "Major",
            (true, true) => "both",
            (false, false) => "none",
        });
    }
    ensure(got == BLUE_BOSSA_PROGRESSIONS, || format!("{got:?}"))?;
    Ok(got.join(" "))
}

fn axiom_counts() -> Outcome {
    let r = blue_bossa("dl", false);
    let c = r.counts();
    let within = |x: usize, target: f64| (x as f64 - target).abs() <= 0.2 * target;
    ensure(within(c.tbox, 130.0), || format!("tbox {}", c.tbox))?;
    ensure(within(c.abox, 29.0), || format!("abox {}", c.abox))?;
    ensure(within(c.tbox + c.abox, 159.0), || format!("total {}", c.tbox + c.abox))?;
    // 7 scaffolding + 3 x 28 symbols + 2 x 10 chain pairs + 21 rules;
    // 11 declarations + 11 types + 10 links.
    ensure(c.tbox == 132 && c.abox == 32, || format!("exact counts {} / {}", c.tbox, c.abox))?;
    Ok(format!("tbox {} (130), abox {} (29), total {} (159)", c.tbox, c.abox, c.tbox + c.abox))
}

fn growth() -> Outcome {
    let g = grammar("bluebossa.cfg");
    let seq = sequence("bluebossa.seq");
    let cfg = ConversionConfig::default();
    let growth = GrowthConfig {
        seed: 7,
        iterations: 20,
        ..GrowthConfig::default()
    };
    let mut baseline: Option<(String, String)> = None;
    let mut mismatch = None;
    let mut formula_ok = true;
    let rows = run_bench_with(&g, &seq, &cfg, &growth, |it, grown, dl, hybrid| {
        let now = (dl.report.to_json(), hybrid.report.to_json());
        match &baseline {
            None => baseline = Some(now),
            Some(b) if *b != now && mismatch.is_none() => mismatch = Some(it),
            _ => {}
        }
        let expected = cfgowl::cfg2owl::expected_axiom_count(grown, &cfg) + (3 * seq.len() - 1);
        formula_ok &= dl.counts.tbox + dl.counts.abox == expected;
    })
    .map_err(|e| e.to_string())?;
    ensure(mismatch.is_none(), || format!("classification changed at iteration {mismatch:?}"))?;
    ensure(formula_ok, || "axiom count deviates from the emission formula".into())?;
    let base = rows[0].productions_total as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.productions_total as f64 - base).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.axioms_total as f64).collect();
    let r2 = r_squared(&xs, &ys);
    ensure(r2 >= 0.99, || format!("R² = {r2}"))?;
    ensure(rows.windows(2).all(|w| w[1].axioms_total > w[0].axioms_total), || "axioms not increasing".into())?;
    let last = rows.last().unwrap();
    let slope = (ys[ys.len() - 1] - ys[0]) / xs[xs.len() - 1];
    ensure(last.hybrid_time_ms <= 0.5 * last.dl_time_ms, || {
        format!("hybrid {:.3} ms vs dl {:.3} ms", last.hybrid_time_ms, last.dl_time_ms)
    })?;
    Ok(format!(
        "+{} productions, R² = {r2:.5}, {slope:.2} statements per production, dl {:.2} ms, hybrid {:.2} ms",
        xs[xs.len() - 1],
        last.dl_time_ms,
        last.hybrid_time_ms
    ))
}

fn parser_properties() -> Outcome {
    let g = grammar("binary_sum.cfg");
    let tree = parse(&g, &toks("1 + 0")).map_err(|e| e.to_string())?;
    let want = "Expression(Expression_0(Expression(1), Plus(+)), Expression(0))";
    ensure(tree.to_string() == want, || format!("tree {tree}"))?;
    let strings = all_strings(&["a", "b", "c"], 6);
    let mut checked = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_strict_cnf(&mut rng, 4, 8);
        for s in &strings {
            ensure(recognize(&g, s) == cyk_recognize(&g, s), || format!("seed {seed}: {s:?}"))?;
            checked += 1;
        }
        for s in enumerate_language(&g, 5) {
            ensure(recognize(&g, &s), || format!("seed {seed}: enumerated {s:?} rejected"))?;
        }
    }
    Ok(format!("tree matches, {checked} Earley/CYK comparisons agree"))
}

fn cnf_properties() -> Outcome {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let g = random_grammar(&mut rng, 4, 8);
        let lang = enumerate_language(&g, 6);
        for mode in [CnfMode::Strict, CnfMode::Relaxed] {
            let n = to_cnf(&g, mode);
            let ok_shape = match mode {
                CnfMode::Strict => n.is_strict_cnf(),
                CnfMode::Relaxed => n.is_relaxed_cnf(),
            };
            ensure(ok_shape, || format!("seed {seed} {mode:?}: not in normal form"))?;
            ensure(enumerate_language(&n, 6) == lang, || format!("seed {seed} {mode:?}: language changed"))?;
            ensure(to_cnf(&n, mode) == n, || format!("seed {seed} {mode:?}: not idempotent"))?;
        }
    }
    Ok("50 grammars, both modes, languages equal up to length 6, idempotent".into())
}

/// Checks the saturated facts of one classification against the axioms it
/// was computed from.
fn check_invariants(c: &Classification, seq: &[String], cfg: &ConversionConfig) -> Result<(), String> {
    let fb = &c.facts;
    let axioms = fb.axioms();
    let inds: Vec<_> = seq.iter().enumerate().map(|(i, t)| cfg.individual(t, i)).collect();

    for a in axioms {
        if let Axiom::EquivalentClasses(ClassExpr::Named(class), ClassExpr::HasSelf(role)) = a {
            for x in &inds {
                ensure(fb.holds_member(class, x) == fb.holds_edge(role, x, x), || {
                    format!("rolification of {class} incoherent at {x}")
                })?;
            }
        }
    }

    let chains: Vec<(&Vec<PropertyTerm>, _)> = axioms
        .iter()
        .filter_map(|a| match a {
            Axiom::SubPropertyChainOf { chain, sup } => Some((chain, sup)),
            _ => None,
        })
        .collect();
    let fires_one = |x: &cfgowl::owl::Iri| {
        chains.iter().any(|(chain, sup)| {
            **sup == cfg.role_one()
                && match chain.as_slice() {
                    [PropertyTerm::Named(ra), PropertyTerm::Named(n), PropertyTerm::Named(rb)] => inds
                        .iter()
                        .any(|y| fb.holds_edge(ra, x, x) && fb.holds_edge(n, x, y) && fb.holds_edge(rb, y, y)),
                    _ => false,
                }
        })
    };
    let fires_two = |y: &cfgowl::owl::Iri| {
        chains.iter().any(|(chain, sup)| {
            **sup == cfg.role_two()
                && match chain.as_slice() {
                    [PropertyTerm::Named(rb), PropertyTerm::Inverse(n), PropertyTerm::Named(ra)] => inds
                        .iter()
                        .any(|x| fb.holds_edge(rb, y, y) && fb.holds_edge(n, x, y) && fb.holds_edge(ra, x, x)),
                    _ => false,
                }
        })
    };
    for x in &inds {
        ensure(fb.holds_member(&cfg.variable_one(), x) == fires_one(x), || format!("VariableOne at {x}"))?;
        ensure(fb.holds_member(&cfg.variable_two(), x) == fires_two(x), || format!("VariableTwo at {x}"))?;
    }

    for (i, (fact, j)) in fb.facts().enumerate() {
        let axiom = axioms.get(j.axiom).ok_or_else(|| format!("fact {i}: no axiom {}", j.axiom))?;
        ensure(j.premises.iter().all(|&p| p < i), || format!("fact {i}: premise after conclusion"))?;
        let asserted = matches!(axiom, Axiom::ClassAssertion(..) | Axiom::ObjectPropertyAssertion { .. });
        ensure(asserted == j.premises.is_empty(), || format!("fact {i}: premises {:?} for {axiom:?}", j.premises))?;
        match (axiom, fact) {
            (Axiom::ClassAssertion(ClassExpr::Named(c), x), Fact::Member { class, individual }) => {
                ensure(c == class && x == individual, || format!("fact {i}: wrong assertion"))?
            }
            (Axiom::SubPropertyChainOf { chain, sup }, Fact::Edge { property, .. }) => {
                ensure(sup == property && j.premises.len() == chain.len(), || format!("fact {i}: bad chain use"))?
            }
            (Axiom::SubPropertyChainOf { .. }, _) => return Err(format!("fact {i}: chain gave a membership")),
            _ => {}
        }
    }
    Ok(())
}

fn materializer_invariants() -> Outcome {
    let cfg = ConversionConfig::default();
    let mut runs = 0;
    let mut facts = 0;
    let mut fixtures: Vec<(Grammar, Vec<String>, bool)> = vec![
        (grammar("binary_sum.cfg"), sequence("binary_sum.seq"), false),
        (grammar("example_32.cfg"), sequence("binary_sum.seq"), false),
        (grammar("bluebossa.cfg"), sequence("bluebossa.seq"), false),
        (grammar("bluebossa.cfg"), sequence("bluebossa.seq"), true),
        (grammar("selfembed.cfg"), sequence("selfembed.seq"), false),
    ];
    // Random relaxed grammars over sequences drawn from their terminals.
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
        let g = to_cnf(&random_grammar(&mut rng, 4, 8), CnfMode::Relaxed);
        let terms: Vec<String> = g.terminals().map(String::from).collect();
        if terms.is_empty() {
            continue;
        }
        let len = rng.gen_range(1..=6);
        let seq = (0..len).map(|_| terms[rng.gen_range(0..terms.len())].clone()).collect();
        fixtures.push((g, seq, false));
    }
    for (g, seq, align) in &fixtures {
        let mut p = Pipeline::new(g.clone(), seq.clone());
        if *align {
            p.alignments.push(alignment("mto_align.ttl"));
        }
        for mode in ["dl", "hybrid"] {
            let r = p.run(mode).map_err(|e| format!("{mode}: {e}"))?;
            check_invariants(&r.classification, seq, &cfg).map_err(|e| format!("{mode} on {seq:?}: {e}"))?;
            facts += r.classification.facts.len();
            runs += 1;
        }
        let dl = p.run("dl").unwrap();
        if !*align {
            let relaxed = if g.is_relaxed_cnf() { g.clone() } else { to_cnf(g, CnfMode::Relaxed) };
            let oracle = naive_classes(&relaxed, seq, &[], &[]);
            ensure(report_sets(&dl.classification.report) == oracle, || {
                format!("naive iteration disagrees on {seq:?}")
            })?;
        }
    }
    Ok(format!("{runs} saturations, {facts} facts, every fact justified"))
}

fn self_embedding() -> Outcome {
    let g = grammar("selfembed.cfg");
    let seq = sequence("selfembed.seq");
    let r = Pipeline::new(g.clone(), seq.clone()).run("dl").map_err(|e| e.to_string())?;
    let got = report_sets(&r.classification.report);
    for (i, s) in got.iter().enumerate() {
        ensure(s.contains("R"), || format!("position {i}: {s:?}"))?;
    }
    let oracle = naive_classes(&to_cnf(&g, CnfMode::Relaxed), &seq, &[], &[]);
    ensure(got == oracle, || format!("{got:?} vs {oracle:?}"))?;
    Ok("R on all 4 positions, sets match naive iteration".into())
}

fn determinism() -> Outcome {
    let cfg = ConversionConfig::default();
    let cases = [
        ("binary_sum.cfg", "binary_sum.seq"),
        ("example_32.cfg", "binary_sum.seq"),
        ("bluebossa.cfg", "bluebossa.seq"),
        ("selfembed.cfg", "selfembed.seq"),
    ];
    let mut compared = 0;
    for (gf, sf) in cases {
        let once = || {
            let g = grammar(gf);
            let seq = sequence(sf);
            let n = to_cnf(&g, CnfMode::Relaxed);
            let tbox = convert(&n, &cfg).unwrap();
            let abox = sequence_to_abox(&seq, &n, &cfg).unwrap();
            let mut out: Vec<String> = Vec::new();
            for s in serializers() {
                out.push(s.serialize(&tbox));
                out.push(s.serialize(&abox));
            }
            for mode in ["dl", "hybrid"] {
                let req = Request::new(&g, &seq, &cfg);
                let c = cfgowl::classify::classifier(mode).unwrap().classify(&req).unwrap();
                out.push(c.report.to_json());
                out.push(c.report.to_table());
            }
            out.push(count_axioms(&tbox).to_string());
            out
        };
        let (a, b) = (once(), once());
        ensure(a == b, || format!("{gf}: outputs differ between runs"))?;
        compared += a.len();
    }
    Ok(format!("{compared} artefacts byte-identical across two runs"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Blue Bossa DL classes", blue_bossa_dl_classes),
        ("hybrid bold classes and containment", hybrid_bold_and_containment),
        ("progression types with alignment", progression_types),
        ("axiom counts", axiom_counts),
        ("growth experiment", growth),
        ("parser properties", parser_properties),
        ("CNF properties", cnf_properties),
        ("materializer invariants", materializer_invariants),
        ("self-embedding", self_embedding),
        ("determinism", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for (n, (name, check)) in criteria.iter().enumerate() {
        let n = n + 1;
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {n:>2}: PASS  {name}: {detail}"),
            Err(reason) => {
                println!("criterion {n:>2}: FAIL  {name}: {reason}");
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
