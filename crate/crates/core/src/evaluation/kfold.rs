use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::history::{data_fingerprint, now_timestamp, EvaluationRecord, RecordKind};
use super::metrics::{ConfusionMatrix, Metrics};
use super::score_trees;
use crate::error::{Error, Result};
use crate::model::{Hyperparameters, Model};
use crate::pipeline::split_blocks;

pub const DEFAULT_SEED: u64 = 0x5353_3301;

/// Fold index for every document.
///
/// Documents are grouped by label (first-appearance order), each group is
/// shuffled with a seeded generator, and the concatenation is dealt to folds
/// round-robin. Fold sizes therefore differ by at most one and every label is
/// spread as evenly as its count allows.
pub fn fold_assignment<S: AsRef<str>>(y: &[S], k: usize, seed: u64) -> Vec<usize> {
    let mut groups: Vec<(&str, Vec<usize>)> = Vec::new();
    for (i, label) in y.iter().enumerate() {
        match groups.iter_mut().find(|(l, _)| *l == label.as_ref()) {
            Some((_, members)) => members.push(i),
            None => groups.push((label.as_ref(), vec![i])),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; y.len()];
    let mut slot = 0;
    for (_, mut members) in groups {
        members.shuffle(&mut rng);
        for i in members {
            folds[i] = slot % k;
            slot += 1;
        }
    }
    folds
}

#[derive(Debug, Clone, PartialEq)]
pub struct KFoldOutcome {
    /// One record per fold, in fold order.
    pub folds: Vec<EvaluationRecord>,
    /// Mean metrics over the folds and the summed confusion matrix.
    pub aggregate: EvaluationRecord,
}

impl KFoldOutcome {
    /// Fold records followed by the aggregate, as appended to the history.
    pub fn records(&self) -> Vec<EvaluationRecord> {
        let mut all = self.folds.clone();
        all.push(self.aggregate.clone());
        all
    }
}

/// Stratified k-fold cross-validation; a fresh model is trained per fold.
#[derive(Debug, Clone)]
pub struct KFold {
    k: usize,
    hyperparameters: Hyperparameters,
    seed: u64,
    timestamp: Option<String>,
}

impl KFold {
    pub fn new(k: usize, hyperparameters: Hyperparameters) -> Self {
        KFold {
            k,
            hyperparameters,
            seed: DEFAULT_SEED,
            timestamp: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn timestamp(mut self, timestamp: impl Into<String>) -> Self {
        self.timestamp = Some(timestamp.into());
        self
    }

    pub fn run<S: AsRef<str>>(&self, x: &[S], y: &[S]) -> Result<KFoldOutcome> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                y_true: y.len(),
                y_pred: x.len(),
            });
        }
        let n = x.len();
        if self.k < 2 || self.k > n {
            return Err(Error::InvalidFoldCount { k: self.k, n });
        }
        self.hyperparameters.validate()?;

        let timestamp = self.timestamp.clone().unwrap_or_else(now_timestamp);
        let mut labels: Vec<&str> = Vec::new();
        for l in y {
            if !labels.contains(&l.as_ref()) {
                labels.push(l.as_ref());
            }
        }
        let assignment = fold_assignment(y, self.k, self.seed);

        let mut folds = Vec::with_capacity(self.k);
        let mut total = ConfusionMatrix::zeros(labels.iter().map(|l| l.to_string()).collect());
        for fold in 0..self.k {
            let (mut train, mut test) = (Vec::new(), Vec::new());
            for (i, &f) in assignment.iter().enumerate() {
                if f == fold {
                    test.push(i);
                } else {
                    train.push(i);
                }
            }
            let mut model = Model::new(self.hyperparameters)?;
            model.fit(train.iter().map(|&i| (x[i].as_ref(), y[i].as_ref())));

            let trees: Vec<_> = test.iter().map(|&i| split_blocks(x[i].as_ref())).collect();
            let y_test: Vec<&str> = test.iter().map(|&i| y[i].as_ref()).collect();
            let x_test: Vec<&str> = test.iter().map(|&i| x[i].as_ref()).collect();
            let (metrics, confusion) = score_trees(&model, model.valuator(), &trees, &y_test, &labels)?;
            total.merge(&confusion);
            folds.push(EvaluationRecord {
                kind: RecordKind::Kfold,
                hyperparameters: self.hyperparameters,
                metrics,
                confusion,
                data_fingerprint: data_fingerprint(&x_test, &y_test),
                timestamp: timestamp.clone(),
                k: Some(self.k),
                fold: Some(fold),
            });
        }

        let mean = Metrics::mean(&folds.iter().map(|r| r.metrics).collect::<Vec<_>>());
        let aggregate = EvaluationRecord {
            kind: RecordKind::Kfold,
            hyperparameters: self.hyperparameters,
            metrics: mean,
            confusion: total,
            data_fingerprint: data_fingerprint(x, y),
            timestamp,
            k: Some(self.k),
            fold: None,
        };
        Ok(KFoldOutcome { folds, aggregate })
    }
}

/// [`KFold`] with the default seed.
pub fn kfold<S: AsRef<str>>(hyperparameters: Hyperparameters, x: &[S], y: &[S], k: usize) -> Result<KFoldOutcome> {
    KFold::new(k, hyperparameters).run(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus() -> (Vec<String>, Vec<String>) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..7 {
            x.push(format!("apple fruit sweet {i}"));
            y.push("food".to_owned());
        }
        for i in 0..5 {
            x.push(format!("goal match team {i}"));
            y.push("sports".to_owned());
        }
        (x, y)
    }

    #[test]
    fn fold_sizes_differ_by_at_most_one() {
        let (_, y) = corpus();
        for k in 2..=12 {
            let folds = fold_assignment(&y, k, DEFAULT_SEED);
            let mut sizes = vec![0; k];
            for f in folds {
                sizes[f] += 1;
            }
            let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            assert!(max - min <= 1, "k={k} sizes={sizes:?}");
        }
    }

    #[test]
    fn deterministic_and_seed_dependent() {
        let (_, y) = corpus();
        assert_eq!(fold_assignment(&y, 3, 7), fold_assignment(&y, 3, 7));
        let differs = (0..20).any(|s| fold_assignment(&y, 3, s) != fold_assignment(&y, 3, 7));
        assert!(differs);
    }

    #[test]
    fn leave_one_out() {
        let (x, y) = corpus();
        let out = KFold::new(x.len(), Hyperparameters::default()).timestamp("t").run(&x, &y).unwrap();
        assert_eq!(out.folds.len(), x.len());
        assert!(out.folds.iter().all(|r| r.confusion.total() == 1));
        assert_eq!(out.aggregate.confusion.total(), x.len() as u64);
        assert_eq!(out.records().len(), x.len() + 1);
    }

    #[test]
    fn separable_corpus_scores_perfectly() {
        let (x, y) = corpus();
        let out = kfold(Hyperparameters::default(), &x, &y, 3).unwrap();
        assert_eq!(out.folds.len(), 3);
        for r in out.records() {
            assert_eq!(r.metrics.accuracy, 1.0);
            assert_eq!(r.k, Some(3));
        }
        assert_eq!(out.aggregate.fold, None);
        assert_eq!(out.aggregate.confusion.labels, ["food", "sports"]);
    }

    #[test]
    fn same_seed_same_records() {
        let (x, y) = corpus();
        let a = KFold::new(4, Hyperparameters::default()).timestamp("t").run(&x, &y).unwrap();
        let b = KFold::new(4, Hyperparameters::default()).timestamp("t").run(&x, &y).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn k_out_of_range() {
        let (x, y) = corpus();
        for k in [0, 1, x.len() + 1] {
            assert!(matches!(
                kfold(Hyperparameters::default(), &x, &y, k),
                Err(Error::InvalidFoldCount { .. })
            ));
        }
    }
}
