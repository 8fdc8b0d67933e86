use std::collections::BTreeSet;

use rayon::prelude::*;

use super::history::{data_fingerprint, now_timestamp, EvaluationRecord, RecordKind};
use super::metrics::Metric;
use super::score_trees;
use crate::error::{Error, Result};
use crate::model::{Hyperparameters, Model};
use crate::pipeline::{split_blocks, BlockNode};
use crate::valuation::{CachedScorer, Valuator};

/// Exhaustive search over `s × l × p` on an already trained model.
///
/// Word counts do not depend on the hyperparameters, so the model is never
/// retrained: every grid point only re-scores the evaluation documents.
/// Points are scored in parallel; records come back in enumeration order
/// (`s` outermost, `p` innermost).
#[derive(Debug, Clone)]
pub struct GridSearch {
    s: Vec<f64>,
    l: Vec<f64>,
    p: Vec<f64>,
    metric: Metric,
    cache: bool,
    timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchOutcome {
    pub best: Hyperparameters,
    pub best_score: f64,
    /// One grid-point record per combination, in enumeration order.
    pub records: Vec<EvaluationRecord>,
}

impl GridSearch {
    pub fn new(s: Vec<f64>, l: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        for (name, values) in [("s", &s), ("l", &l), ("p", &p)] {
            if values.is_empty() {
                return Err(Error::EmptyGrid(name));
            }
        }
        Ok(GridSearch {
            s,
            l,
            p,
            metric: Metric::default(),
            cache: true,
            timestamp: None,
        })
    }

    /// Metric to maximize. Defaults to macro F1.
    pub fn metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    /// Whether word vectors are precomputed per grid point (default) or
    /// recomputed for every occurrence. Results are identical either way.
    pub fn cached(mut self, cache: bool) -> Self {
        self.cache = cache;
        self
    }

    /// Stamps every record with `timestamp` instead of the start time.
    pub fn timestamp(mut self, timestamp: impl Into<String>) -> Self {
        self.timestamp = Some(timestamp.into());
        self
    }

    /// All combinations in enumeration order. Fails on the first invalid one.
    pub fn points(&self) -> Result<Vec<Hyperparameters>> {
        let mut points = Vec::with_capacity(self.s.len() * self.l.len() * self.p.len());
        for &s in &self.s {
            for &l in &self.l {
                for &p in &self.p {
                    points.push(Hyperparameters::new(s, l, p)?);
                }
            }
        }
        Ok(points)
    }

    pub fn run<S: AsRef<str> + Sync>(&self, model: &Model, x: &[S], y: &[S]) -> Result<GridSearchOutcome> {
        if model.is_empty() {
            return Err(Error::EmptyModel);
        }
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                y_true: y.len(),
                y_pred: x.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::EmptyEvaluation);
        }
        let points = self.points()?;
        let timestamp = self.timestamp.clone().unwrap_or_else(now_timestamp);
        let fingerprint = data_fingerprint(x, y);
        let trees: Vec<BlockNode> = x.iter().map(|t| split_blocks(t.as_ref())).collect();
        let vocabulary: BTreeSet<&str> = trees
            .iter()
            .flat_map(|t| t.words())
            .filter_map(|w| w.token.as_deref())
            .collect();

        let labels = model.category_names();
        let records = points
            .par_iter()
            .map(|&hp| {
                let valuator = Valuator::with_hyperparameters(model, hp)?;
                let (metrics, confusion) = if self.cache {
                    let cached = CachedScorer::new(&valuator, vocabulary.iter().copied());
                    score_trees(model, cached, &trees, y, &labels)?
                } else {
                    score_trees(model, valuator, &trees, y, &labels)?
                };
                Ok(EvaluationRecord {
                    kind: RecordKind::GridPoint,
                    hyperparameters: hp,
                    metrics,
                    confusion,
                    data_fingerprint: fingerprint.clone(),
                    timestamp: timestamp.clone(),
                    k: None,
                    fold: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut best = 0;
        for (i, r) in records.iter().enumerate() {
            if r.metrics.get(self.metric) > records[best].metrics.get(self.metric) {
                best = i;
            }
        }
        Ok(GridSearchOutcome {
            best: records[best].hyperparameters,
            best_score: records[best].metrics.get(self.metric),
            records,
        })
    }
}

/// Runs a [`GridSearch`] with default settings.
pub fn grid_search<S: AsRef<str> + Sync>(
    model: &Model,
    x: &[S],
    y: &[S],
    s: &[f64],
    l: &[f64],
    p: &[f64],
    metric: Metric,
) -> Result<GridSearchOutcome> {
    GridSearch::new(s.to_vec(), l.to_vec(), p.to_vec())?
        .metric(metric)
        .run(model, x, y)
}
