use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rows are true labels, columns predicted labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn zeros(labels: Vec<String>) -> Self {
        let n = labels.len();
        ConfusionMatrix {
            labels,
            counts: vec![vec![0; n]; n],
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Adds another matrix over the same labels.
    pub fn merge(&mut self, other: &ConfusionMatrix) {
        assert_eq!(self.labels, other.labels, "confusion matrices over different labels");
        for (row, other_row) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
    }
}

/// Scores kept for every evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Metrics {
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

impl Metrics {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Accuracy => self.accuracy,
            Metric::MacroPrecision => self.macro_precision,
            Metric::MacroRecall => self.macro_recall,
            Metric::MacroF1 => self.macro_f1,
        }
    }

    /// Componentwise mean. Panics on an empty slice.
    pub fn mean(all: &[Metrics]) -> Metrics {
        assert!(!all.is_empty());
        let n = all.len() as f64;
        let sum = |f: fn(&Metrics) -> f64| all.iter().map(f).sum::<f64>() / n;
        Metrics {
            accuracy: sum(|m| m.accuracy),
            macro_precision: sum(|m| m.macro_precision),
            macro_recall: sum(|m| m.macro_recall),
            macro_f1: sum(|m| m.macro_f1),
        }
    }

    /// Derives every metric from a confusion matrix. Macro averages run over
    /// the labels with at least one true instance.
    pub fn from_confusion(confusion: &ConfusionMatrix) -> Metrics {
        let n = confusion.labels.len();
        let total = confusion.total();
        let accuracy = if total == 0 {
            0.0
        } else {
            confusion.trace() as f64 / total as f64
        };

        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let (mut p_sum, mut r_sum, mut f_sum, mut present) = (0.0, 0.0, 0.0, 0usize);
        for i in 0..n {
            let actual: u64 = confusion.counts[i].iter().sum();
            if actual == 0 {
                continue;
            }
            let tp = confusion.counts[i][i];
            let predicted: u64 = (0..n).map(|r| confusion.counts[r][i]).sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, actual);
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            p_sum += precision;
            r_sum += recall;
            f_sum += f1;
            present += 1;
        }
        let avg = |s: f64| if present == 0 { 0.0 } else { s / present as f64 };
        Metrics {
            accuracy,
            macro_precision: avg(p_sum),
            macro_recall: avg(r_sum),
            macro_f1: avg(f_sum),
        }
    }
}

/// The score a search optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Accuracy,
    MacroPrecision,
    MacroRecall,
    #[default]
    MacroF1,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Accuracy,
        Metric::MacroPrecision,
        Metric::MacroRecall,
        Metric::MacroF1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::MacroPrecision => "macro-precision",
            Metric::MacroRecall => "macro-recall",
            Metric::MacroF1 => "macro-f1",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown metric `{s}` (expected accuracy, macro-precision, macro-recall or macro-f1)"))
    }
}

/// Builds the confusion matrix over `labels`, appending any label that only
/// shows up in the data, in first-appearance order (true labels first).
pub fn confusion_matrix<S: AsRef<str>>(labels: &[S], y_true: &[S], y_pred: &[S]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            y_true: y_true.len(),
            y_pred: y_pred.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let mut all: Vec<String> = Vec::new();
    for l in labels.iter().chain(y_true).chain(y_pred) {
        if !all.iter().any(|a| a == l.as_ref()) {
            all.push(l.as_ref().to_owned());
        }
    }
    let mut confusion = ConfusionMatrix::zeros(all);
    for (t, p) in y_true.iter().zip(y_pred) {
        let i = confusion.index_of(t.as_ref()).expect("label collected above");
        let j = confusion.index_of(p.as_ref()).expect("label collected above");
        confusion.counts[i][j] += 1;
    }
    Ok(confusion)
}

/// Accuracy and macro precision/recall/F1 of a prediction run.
///
/// Per-class ratios with a zero denominator count as 0.
pub fn metrics<S: AsRef<str>>(y_true: &[S], y_pred: &[S]) -> Result<(Metrics, ConfusionMatrix)> {
    let confusion = confusion_matrix(&[], y_true, y_pred)?;
    Ok((Metrics::from_confusion(&confusion), confusion))
}
