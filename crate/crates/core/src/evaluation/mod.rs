//! Metrics, cross-validation, grid search, evaluation history and the
//! portable evaluation plot.

mod grid;
mod history;
mod kfold;
mod metrics;
mod plot;

pub use grid::{grid_search, GridSearch, GridSearchOutcome};
pub use history::{
    data_fingerprint, history_append, history_append_all, history_load, now_timestamp, record_to_line,
    EvaluationRecord, RecordKind,
};
pub use kfold::{fold_assignment, kfold, KFold, KFoldOutcome, DEFAULT_SEED};
pub use metrics::{confusion_matrix, metrics, ConfusionMatrix, Metric, Metrics};
pub use plot::{emit_plot, extract_plot_data, render_plot, PLOT_DATA_ELEMENT_ID};

use crate::error::{Error, Result};
use crate::model::Model;
use crate::pipeline::{BlockNode, Classifier};
use crate::valuation::WordScorer;

/// Classifies pre-split documents with `scorer` and scores them against `y`.
/// The confusion matrix lists `labels` first, then any other label seen.
fn score_trees<W: WordScorer, S: AsRef<str>>(
    model: &Model,
    scorer: W,
    trees: &[BlockNode],
    y: &[S],
    labels: &[&str],
) -> Result<(Metrics, ConfusionMatrix)> {
    let classifier = Classifier::with_scorer(model, scorer)?;
    let predicted: Vec<String> = trees
        .iter()
        .map(|t| {
            let root = classifier.annotate(t.clone()).confidence;
            let i = root.argmax().unwrap_or(0);
            model.categories()[i].name().to_owned()
        })
        .collect();
    let y_true: Vec<&str> = y.iter().map(AsRef::as_ref).collect();
    let y_pred: Vec<&str> = predicted.iter().map(String::as_str).collect();
    let confusion = confusion_matrix(labels, &y_true, &y_pred)?;
    Ok((Metrics::from_confusion(&confusion), confusion))
}

/// Scores a trained model on a labeled test set under its own
/// hyperparameters and returns a `test` record.
pub fn evaluate<S: AsRef<str>>(model: &Model, x: &[S], y: &[S]) -> Result<EvaluationRecord> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            y_true: y.len(),
            y_pred: x.len(),
        });
    }
    let trees: Vec<BlockNode> = x.iter().map(|t| crate::pipeline::split_blocks(t.as_ref())).collect();
    let (metrics, confusion) = score_trees(model, model.valuator(), &trees, y, &model.category_names())?;
    Ok(EvaluationRecord {
        kind: RecordKind::Test,
        hyperparameters: model.hyperparameters(),
        metrics,
        confusion,
        data_fingerprint: data_fingerprint(x, y),
        timestamp: now_timestamp(),
        k: None,
        fold: None,
    })
}
