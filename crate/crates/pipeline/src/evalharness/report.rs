//! Aggregate tables over scored rows and their text, CSV and JSON forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tempqa_core::QuestionType;

use super::{ConfidenceReport, ScoredRow};
use crate::orchestrator::Technique;

pub const DEFAULT_BIN_WIDTH: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechniqueRow {
    pub technique: Technique,
    pub questions: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub mean_time: f64,
    pub std_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeRow {
    /// Question type name, or `Total`.
    pub task: String,
    /// Distinct instances of this type.
    pub questions: usize,
    /// Accuracy per technique present in the results.
    pub accuracy: BTreeMap<Technique, f64>,
}

/// Percent of function-calling runs in each (designated?, correct?) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionUsage {
    pub runs: usize,
    pub associated_true: f64,
    pub associated_false: f64,
    pub non_associated_true: f64,
    pub non_associated_false: f64,
}

impl FunctionUsage {
    /// Cells in table order: true predictions (associated, non-associated),
    /// then false predictions.
    pub fn cells(&self) -> [f64; 4] {
        [
            self.associated_true,
            self.non_associated_true,
            self.associated_false,
            self.non_associated_false,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenBin {
    pub technique: Technique,
    /// Inclusive token range.
    pub lo: usize,
    pub hi: usize,
    pub total: usize,
    pub false_predictions: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub techniques: Vec<TechniqueRow>,
    pub per_type: Vec<TypeRow>,
    /// `None` when no function-calling technique ran.
    pub function_usage: Option<FunctionUsage>,
    pub bin_width: usize,
    pub token_bins: Vec<TokenBin>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence: Option<ConfidenceReport>,
}

fn pct(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 * 100.0 / d as f64
    }
}

/// Rows in a canonical order so every float sum is order independent.
fn canonical(rows: &[ScoredRow]) -> Vec<&ScoredRow> {
    let mut v: Vec<&ScoredRow> = rows.iter().collect();
    v.sort_by(|a, b| {
        (a.technique, &a.instance_id, a.question_type)
            .cmp(&(b.technique, &b.instance_id, b.question_type))
            .then(a.wall_time.total_cmp(&b.wall_time))
    });
    v
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn function_usage(rows: &[ScoredRow]) -> Option<FunctionUsage> {
    let runs: Vec<&ScoredRow> = rows.iter().filter(|r| r.technique.uses_functions()).collect();
    if runs.is_empty() {
        return None;
    }
    let count = |assoc: bool, ok: bool| {
        runs.iter()
            .filter(|r| r.associated.unwrap_or(false) == assoc && r.correct == ok)
            .count()
    };
    let n = runs.len();
    Some(FunctionUsage {
        runs: n,
        associated_true: pct(count(true, true), n),
        associated_false: pct(count(true, false), n),
        non_associated_true: pct(count(false, true), n),
        non_associated_false: pct(count(false, false), n),
    })
}

/// False-prediction rate per technique and token range. Empty bins are
/// omitted.
pub fn token_bins(rows: &[ScoredRow], bin_width: usize) -> Vec<TokenBin> {
    let width = bin_width.max(1);
    let mut bins: BTreeMap<(Technique, usize), (usize, usize)> = BTreeMap::new();
    for r in rows {
        let e = bins.entry((r.technique, r.token_estimate / width)).or_default();
        e.0 += 1;
        e.1 += usize::from(!r.correct);
    }
    bins.into_iter()
        .map(|((technique, b), (total, wrong))| TokenBin {
            technique,
            lo: b * width,
            hi: b * width + width - 1,
            total,
            false_predictions: wrong,
            rate: pct(wrong, total),
        })
        .collect()
}

pub fn aggregate(rows: &[ScoredRow]) -> Report {
    aggregate_with(rows, DEFAULT_BIN_WIDTH)
}

pub fn aggregate_with(rows: &[ScoredRow], bin_width: usize) -> Report {
    let rows = canonical(rows);
    let present: BTreeSet<Technique> = rows.iter().map(|r| r.technique).collect();

    let techniques = present
        .iter()
        .map(|t| {
            let mine: Vec<&&ScoredRow> = rows.iter().filter(|r| r.technique == *t).collect();
            let times: Vec<f64> = mine.iter().map(|r| r.wall_time).collect();
            let (mean_time, std_time) = mean_std(&times);
            let correct = mine.iter().filter(|r| r.correct).count();
            TechniqueRow {
                technique: *t,
                questions: mine.len(),
                correct,
                accuracy: pct(correct, mine.len()),
                mean_time,
                std_time,
            }
        })
        .collect();

    let type_row = |task: String, subset: &[&ScoredRow]| {
        let questions = subset.iter().map(|r| &r.instance_id).collect::<BTreeSet<_>>().len();
        let accuracy = present
            .iter()
            .filter_map(|t| {
                let mine: Vec<_> = subset.iter().filter(|r| r.technique == *t).collect();
                (!mine.is_empty()).then(|| (*t, pct(mine.iter().filter(|r| r.correct).count(), mine.len())))
            })
            .collect();
        TypeRow {
            task,
            questions,
            accuracy,
        }
    };
    let mut per_type: Vec<TypeRow> = QuestionType::ALL
        .iter()
        .filter_map(|q| {
            let subset: Vec<&ScoredRow> = rows.iter().copied().filter(|r| r.question_type == *q).collect();
            (!subset.is_empty()).then(|| type_row(q.name().to_string(), &subset))
        })
        .collect();
    if !rows.is_empty() {
        per_type.push(type_row("Total".into(), &rows));
    }

    let owned: Vec<ScoredRow> = rows.iter().map(|r| (*r).clone()).collect();
    Report {
        techniques,
        per_type,
        function_usage: function_usage(&owned),
        bin_width,
        token_bins: token_bins(&owned, bin_width),
        confidence: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected text, csv or json)")),
        }
    }
}

fn p1(x: f64) -> String {
    format!("{x:.1}%")
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }

    fn columns(&self) -> Vec<Technique> {
        self.techniques.iter().map(|r| r.technique).collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<12}{:>10}{:>15}{:>10}", "Method", "Accuracy", "Average Time", "Std Dev");
        for r in &self.techniques {
            let _ = writeln!(
                out,
                "{:<12}{:>10}{:>15.2}{:>10.2}",
                r.technique.label(),
                p1(r.accuracy),
                r.mean_time,
                r.std_time
            );
        }

        let cols = self.columns();
        if !self.per_type.is_empty() {
            out.push('\n');
            let _ = write!(out, "{:<38}{:>10}", "Task", "Questions");
            for t in &cols {
                let _ = write!(out, "{:>10}", t.label());
            }
            out.push('\n');
            for row in &self.per_type {
                let _ = write!(out, "{:<38}{:>10}", row.task, row.questions);
                for t in &cols {
                    let cell = row.accuracy.get(t).map_or("-".to_string(), |a| p1(*a));
                    let _ = write!(out, "{cell:>10}");
                }
                out.push('\n');
            }
        }

        out.push('\n');
        match &self.function_usage {
            None => out.push_str("Function usage: n/a\n"),
            Some(u) => {
                let [at, nt, af, nf] = u.cells();
                let _ = writeln!(out, "Function usage ({} runs)", u.runs);
                let _ = writeln!(out, "{:<14}{:>20}{:>24}", "", "Associated Funct.", "Non-Associated Funct.");
                let _ = writeln!(out, "{:<14}{:>20}{:>24}", "True Pred.", p1(at), p1(nt));
                let _ = writeln!(out, "{:<14}{:>20}{:>24}", "False Pred.", p1(af), p1(nf));
            }
        }

        if !self.token_bins.is_empty() {
            out.push('\n');
            let _ = writeln!(out, "{:<12}{:>16}{:>8}{:>8}{:>10}", "Method", "Tokens", "Total", "False", "Rate");
            for b in &self.token_bins {
                let _ = writeln!(
                    out,
                    "{:<12}{:>16}{:>8}{:>8}{:>10}",
                    b.technique.label(),
                    format!("{}-{}", b.lo, b.hi),
                    b.total,
                    b.false_predictions,
                    p1(b.rate)
                );
            }
        }

        if let Some(c) = &self.confidence {
            out.push('\n');
            out.push_str(&c.render_text());
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        let mut put = |rec: Vec<String>| w.write_record(&rec).expect("in-memory csv");
        let s = |x: &str| x.to_string();
        put(vec![s("section"), s("Method"), s("Accuracy"), s("Average Time"), s("Std Dev")]);
        for r in &self.techniques {
            put(vec![
                s("techniques"),
                s(r.technique.label()),
                format!("{:.1}", r.accuracy),
                format!("{:.2}", r.mean_time),
                format!("{:.2}", r.std_time),
            ]);
        }
        let cols = self.columns();
        let mut head = vec![s("section"), s("Task"), s("Questions")];
        head.extend(cols.iter().map(|t| s(t.label())));
        put(head);
        for row in &self.per_type {
            let mut rec = vec![s("per_type"), row.task.clone(), row.questions.to_string()];
            rec.extend(cols.iter().map(|t| row.accuracy.get(t).map_or(String::new(), |a| format!("{a:.1}"))));
            put(rec);
        }
        put(vec![s("section"), s("Prediction"), s("Associated Funct."), s("Non-Associated Funct.")]);
        match &self.function_usage {
            None => put(vec![s("function_usage"), s("n/a")]),
            Some(u) => {
                let [at, nt, af, nf] = u.cells();
                put(vec![s("function_usage"), s("True Pred."), format!("{at:.1}"), format!("{nt:.1}")]);
                put(vec![s("function_usage"), s("False Pred."), format!("{af:.1}"), format!("{nf:.1}")]);
            }
        }
        put(vec![s("section"), s("Method"), s("Tokens From"), s("Tokens To"), s("Total"), s("False"), s("Rate")]);
        for b in &self.token_bins {
            put(vec![
                s("token_bins"),
                s(b.technique.label()),
                b.lo.to_string(),
                b.hi.to_string(),
                b.total.to_string(),
                b.false_predictions.to_string(),
                format!("{:.1}", b.rate),
            ]);
        }
        if let Some(c) = &self.confidence {
            put(vec![s("section"), s("Actual"), s("Knowledge"), s("Temporal")]);
            for (label, row) in ["Knowledge", "Temporal"].iter().zip(c.matrix) {
                put(vec![s("confidence"), s(label), row[0].to_string(), row[1].to_string()]);
            }
            put(vec![s("confidence"), s("Accuracy"), c.accuracy.map_or(String::new(), |a| format!("{a:.1}"))]);
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}
