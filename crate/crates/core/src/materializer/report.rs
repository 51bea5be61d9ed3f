use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::FactBase;
use crate::cfg2owl::ConversionConfig;
use crate::owl::{short_name, Iri, Ontology};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub position: usize,
    pub token: String,
    pub individual: String,
    /// Sorted display names.
    pub classes: Vec<String>,
    pub mode: String,
}

/// Per-position classes of a classified sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub rows: Vec<ReportRow>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl ClassificationReport {
    /// Rows for `seq` from a saturated fact base, keeping only classes in
    /// `declared` and naming them relative to `names`.
    pub fn build(
        mode: &str,
        seq: &[String],
        cfg: &ConversionConfig,
        facts: &FactBase,
        declared: &HashSet<&Iri>,
        names: &Ontology,
        include_scaffolding: bool,
    ) -> Self {
        let scaffolding = [cfg.variable_one(), cfg.variable_two()];
        let rows = seq
            .iter()
            .enumerate()
            .map(|(position, token)| {
                let ind = cfg.individual(token, position);
                let mut classes: Vec<String> = facts
                    .classes_of(&ind)
                    .into_iter()
                    .filter(|c| declared.contains(c))
                    .filter(|c| include_scaffolding || !scaffolding.contains(c))
                    .map(|c| short_name(names, c))
                    .collect();
                classes.sort();
                classes.dedup();
                ReportRow {
                    position,
                    token: token.clone(),
                    individual: short_name(names, &ind),
                    classes,
                    mode: mode.to_string(),
                }
            })
            .collect();
        ClassificationReport {
            rows,
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        Ok(ClassificationReport {
            rows: serde_json::from_str(text)?,
            warnings: Vec::new(),
        })
    }

    /// `position  token  classes…`, one line per row, columns padded.
    pub fn to_table(&self) -> String {
        let tw = self.rows.iter().map(|r| r.token.chars().count()).max().unwrap_or(0).max(5);
        let mut out = String::new();
        writeln!(out, "{:>3}  {:<tw$}  classes", "pos", "token").unwrap();
        for r in &self.rows {
            writeln!(out, "{:>3}  {:<tw$}  {}", r.position, r.token, r.classes.join(" ")).unwrap();
        }
        out
    }

    pub fn classes_at(&self, position: usize) -> Option<&[String]> {
        self.rows.get(position).map(|r| r.classes.as_slice())
    }
}
