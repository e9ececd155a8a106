//! Confusion matrix of actual vs predicted task labels.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tempqa_core::ratagen::TaskLabel;

use super::Format;
use crate::orchestrator::classify;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceReport {
    pub threshold: f64,
    /// `matrix[actual][predicted]`, index 0 knowledge, 1 temporal.
    pub matrix: [[u64; 2]; 2],
    /// Items without a usable score; they are left out of the matrix.
    pub missing: usize,
    /// Percent of classified items on the diagonal, `None` when there are none.
    pub accuracy: Option<f64>,
}

fn index(l: TaskLabel) -> usize {
    match l {
        TaskLabel::Knowledge => 0,
        TaskLabel::Temporal => 1,
    }
}

impl ConfidenceReport {
    pub fn from_matrix(matrix: [[u64; 2]; 2], threshold: f64, missing: usize) -> Self {
        let total: u64 = matrix.iter().flatten().sum();
        let accuracy = (total > 0).then(|| (matrix[0][0] + matrix[1][1]) as f64 * 100.0 / total as f64);
        Self {
            threshold,
            matrix,
            missing,
            accuracy,
        }
    }

    pub fn total(&self) -> u64 {
        self.matrix.iter().flatten().sum()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }

    pub fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut put = |rec: [String; 3]| w.write_record(&rec).expect("in-memory csv");
        put(["Actual".into(), "Knowledge".into(), "Temporal".into()]);
        for (label, row) in ["Knowledge", "Temporal"].iter().zip(self.matrix) {
            put([label.to_string(), row[0].to_string(), row[1].to_string()]);
        }
        let acc = self.accuracy.map_or(String::new(), |a| format!("{a:.1}"));
        put(["Accuracy".into(), acc, String::new()]);
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<20}{:>12}{:>12}", "Actual \\ Predicted", "Knowledge", "Temporal");
        for (label, row) in ["Knowledge", "Temporal"].iter().zip(self.matrix) {
            let _ = writeln!(out, "{label:<20}{:>12}{:>12}", row[0], row[1]);
        }
        let acc = self.accuracy.map_or("n/a".to_string(), |a| format!("{a:.1}%"));
        let _ = writeln!(out, "Threshold: {}", self.threshold);
        let _ = writeln!(out, "Accuracy: {acc}");
        if self.missing > 0 {
            let _ = writeln!(out, "Missing scores: {}", self.missing);
        }
        out
    }
}

/// Predict temporal iff `score >= threshold` and tabulate against the
/// actual labels.
pub fn confidence_report(items: &[(TaskLabel, Option<f64>)], threshold: f64) -> ConfidenceReport {
    let mut matrix = [[0u64; 2]; 2];
    let mut missing = 0;
    for (actual, score) in items {
        match score {
            Some(s) => matrix[index(*actual)][index(classify(*s, threshold))] += 1,
            None => missing += 1,
        }
    }
    ConfidenceReport::from_matrix(matrix, threshold, missing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_scores_are_perfect() {
        let items: Vec<_> = (0..10)
            .map(|i| {
                if i % 2 == 0 {
                    (TaskLabel::Temporal, Some(1.0))
                } else {
                    (TaskLabel::Knowledge, Some(0.0))
                }
            })
            .collect();
        let r = confidence_report(&items, 0.8);
        assert_eq!(r.matrix, [[5, 0], [0, 5]]);
        assert_eq!(r.accuracy, Some(100.0));
    }

    #[test]
    fn threshold_above_one_predicts_knowledge() {
        let items = [(TaskLabel::Temporal, Some(1.0)), (TaskLabel::Knowledge, Some(0.3))];
        assert_eq!(confidence_report(&items, 1.01).matrix, [[1, 0], [1, 0]]);
    }

    #[test]
    fn missing_scores_are_counted_apart() {
        let r = confidence_report(&[(TaskLabel::Temporal, None)], 0.8);
        assert_eq!((r.missing, r.total(), r.accuracy), (1, 0, None));
        assert!(r.render_text().contains("n/a"));
    }
}
