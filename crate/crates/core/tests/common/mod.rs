#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use cfgowl::cfg2owl::ConversionConfig;
use cfgowl::grammar::{Grammar, Symbol};
use cfgowl::owl::Ontology;
use cfgowl::pipeline::{load_alignment, load_grammar, load_sequence};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn grammar(name: &str) -> Grammar {
    load_grammar(&fixture(name)).unwrap()
}

pub fn sequence(name: &str) -> Vec<String> {
    load_sequence(&fixture(name)).unwrap()
}

pub fn alignment(name: &str) -> Ontology {
    load_alignment(&fixture(name), &ConversionConfig::default()).unwrap()
}

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

pub fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Inferred classes per chord of Blue Bossa under the DL encoding.
pub fn blue_bossa_expected() -> Vec<(&'static str, BTreeSet<String>)> {
    let rows: [(&str, &[&str]); 11] = [
        ("C:min7", &["OnOffMinorIV_Cm", "VariableOne", "C:min7", "MinorOn_Cm"]),
        ("F:min7", &["OnOffMinorIV_Cm", "VariableTwo", "F:min7", "Off_F"]),
        ("D:hdim7", &["VariableOne", "SadApproach_Cm", "SadCadence_Cm", "D:hdim7"]),
        (
            "G:7",
            &["MinorPerfectCadence_Cm", "VariableTwo", "VariableOne", "G:7", "SadApproach_Cm", "SadCadence_Cm"],
        ),
        ("C:minmaj7", &["C:minmaj7", "VariableTwo", "MinorOn_Cm", "SadCadence_Cm"]),
        ("Eb:min7", &["VariableOne", "StraightApproach_Db", "StraightCadence_Db", "Eb:min7"]),
        (
            "Ab:7",
            &["VariableTwo", "VariableOne", "StraightApproach_Db", "Ab:7", "StraightCadence_Db", "StraightApproach_C_0"],
        ),
        ("Db:maj7", &["VariableTwo", "Db:maj7", "StraightCadence_Db"]),
        ("D:hdim7", &["VariableOne", "SadApproach_Cm", "SadCadence_Cm", "D:hdim7"]),
        (
            "G:7",
            &["MinorPerfectCadence_Cm", "VariableTwo", "VariableOne", "G:7", "SadApproach_Cm", "SadCadence_Cm"],
        ),
        ("C:minmaj7", &["C:minmaj7", "VariableTwo", "MinorOn_Cm", "SadCadence_Cm"]),
    ];
    rows.iter().map(|(c, cs)| (*c, set(cs))).collect()
}

/// The reference brick analysis of each chord.
pub const BLUE_BOSSA_BOLD: [&str; 11] = [
    "OnOffMinorIV_Cm",
    "OnOffMinorIV_Cm",
    "SadCadence_Cm",
    "SadCadence_Cm",
    "SadCadence_Cm",
    "StraightCadence_Db",
    "StraightCadence_Db",
    "StraightCadence_Db",
    "SadCadence_Cm",
    "SadCadence_Cm",
    "SadCadence_Cm",
];

pub const BLUE_BOSSA_PROGRESSIONS: [&str; 11] = [
    "Minor", "Minor", "Minor", "Minor", "Minor", "Major", "Major", "Major", "Minor", "Minor", "Minor",
];

pub const SCAFFOLDING: [&str; 2] = ["VariableOne", "VariableTwo"];

/// Extra adjacency rules `(A, B, R)` over class names, on top of the
/// grammar's own binary productions.
pub type ExtraRule = (String, String, String);

/// Classes per position by direct naive iteration over grammar rules, with
/// one shared VariableOne/VariableTwo pair:
///
/// * position `i` holds its token;
/// * `R -> t`: `t ∈ S(i)` gives `R ∈ S(i)`;
/// * `R -> A B` with `A ∈ S(i)`, `B ∈ S(i+1)`: `VariableOne ∈ S(i)`,
///   `VariableTwo ∈ S(i+1)`;
/// * `R -> A B`: `A, VariableOne ∈ S(i)` or `B, VariableTwo ∈ S(i)` gives
///   `R ∈ S(i)`;
/// * `subclass` pairs `(C, D)`: `C ∈ S(i)` gives `D ∈ S(i)`.
///
/// Loops until nothing changes; no indexing, no worklist.
pub fn naive_classes(
    g: &Grammar,
    seq: &[String],
    extra: &[ExtraRule],
    subclass: &[(String, String)],
) -> Vec<BTreeSet<String>> {
    let mut binary: Vec<(String, String, String)> = g
        .productions()
        .iter()
        .filter(|p| p.rhs.len() == 2)
        .map(|p| (p.rhs[0].text().to_string(), p.rhs[1].text().to_string(), p.lhs.clone()))
        .collect();
    binary.extend(extra.iter().cloned());
    let unary: Vec<(String, String)> = g
        .productions()
        .iter()
        .filter_map(|p| match p.rhs.as_slice() {
            [Symbol::Terminal(t)] => Some((t.clone(), p.lhs.clone())),
            _ => None,
        })
        .collect();

    let mut s: Vec<BTreeSet<String>> = seq.iter().map(|t| BTreeSet::from([t.clone()])).collect();
    loop {
        let before: usize = s.iter().map(BTreeSet::len).sum();
        for i in 0..s.len() {
            for (t, r) in unary.iter().chain(subclass) {
                if s[i].contains(t) {
                    s[i].insert(r.clone());
                }
            }
            for (a, b, r) in &binary {
                if i + 1 < s.len() && s[i].contains(a) && s[i + 1].contains(b) {
                    s[i].insert("VariableOne".into());
                    s[i + 1].insert("VariableTwo".into());
                }
                let left = s[i].contains(a) && s[i].contains("VariableOne");
                let right = s[i].contains(b) && s[i].contains("VariableTwo");
                if left || right {
                    s[i].insert(r.clone());
                }
            }
        }
        let after: usize = s.iter().map(BTreeSet::len).sum();
        if after == before {
            return s;
        }
    }
}

/// Report rows as name sets.
pub fn report_sets(report: &cfgowl::materializer::ClassificationReport) -> Vec<BTreeSet<String>> {
    report.rows.iter().map(|r| r.classes.iter().cloned().collect()).collect()
}
