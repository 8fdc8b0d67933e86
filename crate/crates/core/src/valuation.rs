//! Word valuation: local value, significance, sanction and the global value
//! that multiplies them.
//!
//! For a word `w` and category `c`:
//!
//! * `lv(w, c) = (freq(w, c) / max_freq(c))^s`, zero for unseen words.
//! * `sg(w, c)` is a logistic curve over how far `lv(w, c)` rises above the
//!   median of `lv(w, ·)` across all categories, relative to `l · median`.
//!   A zero median short-circuits to `1` if `lv(w, c) > 0` and `0` otherwise.
//! * `sn(w, c)` shrinks linearly with the number of categories where
//!   `sg >= 0.5`, at a rate set by `p`.
//! * `gv(w, c) = lv · sg · sn`.
//!
//! Significance and sanction of one cell depend on the whole row of local
//! values, so [`Valuator`] always computes a word's row in one pass.

use std::collections::HashMap;

use crate::confidence::ConfidenceVector;
use crate::error::{Error, Result};
use crate::model::{Hyperparameters, Model};

/// Steepness of the significance logistic.
pub const SIGNIFICANCE_STEEPNESS: f64 = 4.0;
/// Added to the significance threshold so that `l = 0` or a tiny median never
/// divides by zero.
pub const SIGNIFICANCE_EPSILON: f64 = 1e-6;
/// A word counts as significant to a category when `sg` reaches this value.
pub const SIGNIFICANCE_CUTOFF: f64 = 0.5;

/// Maps a word's raw frequency in a category to its local value.
///
/// [`PowerLaw`] is the default; other curves can be plugged into a
/// [`Valuator`] without touching the rest of the pipeline.
pub trait LocalValue: Send + Sync {
    /// `freq` is the word's count in the category, `max_freq` the count of the
    /// category's most frequent word. Must return a value in `[0, 1]` and `0`
    /// whenever `freq == 0`.
    fn local_value(&self, freq: u64, max_freq: u64, smoothness: f64) -> f64;
}

/// `(freq / max_freq)^s`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PowerLaw;

impl LocalValue for PowerLaw {
    fn local_value(&self, freq: u64, max_freq: u64, smoothness: f64) -> f64 {
        if freq == 0 || max_freq == 0 {
            return 0.0;
        }
        (freq as f64 / max_freq as f64).powf(smoothness)
    }
}

/// Median with the mean of the two middle values for even lengths. `0` for an
/// empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

/// Significance of a local value given the median of its row and `l`.
pub fn significance_of(local_value: f64, median: f64, l: f64) -> f64 {
    if median == 0.0 {
        return if local_value > 0.0 { 1.0 } else { 0.0 };
    }
    let deviation = local_value - median;
    let ratio = deviation / (l * median + SIGNIFICANCE_EPSILON);
    1.0 / (1.0 + (-SIGNIFICANCE_STEEPNESS * (ratio - 1.0)).exp())
}

/// Sanction for a word significant to `significant` out of `categories`
/// categories.
pub fn sanction_of(significant: usize, categories: usize, p: f64) -> f64 {
    if significant <= 1 {
        return 1.0;
    }
    let spread = (significant - 1) as f64 / categories.saturating_sub(1).max(1) as f64;
    (1.0 - p * spread).clamp(0.0, 1.0)
}

/// The four valuations of one word against every category.
#[derive(Debug, Clone, PartialEq)]
pub struct WordValuation {
    pub local: Vec<f64>,
    pub significance: Vec<f64>,
    pub sanction: Vec<f64>,
    pub global: Vec<f64>,
}

/// Computes valuations over a model under a fixed set of hyperparameters.
///
/// The hyperparameters need not be the model's own, which lets a single
/// trained model be scored under many settings without copying it.
#[derive(Debug, Clone)]
pub struct Valuator<'m, L = PowerLaw> {
    model: &'m Model,
    hyperparameters: Hyperparameters,
    local: L,
}

impl<'m> Valuator<'m, PowerLaw> {
    pub fn new(model: &'m Model) -> Self {
        Valuator {
            model,
            hyperparameters: model.hyperparameters(),
            local: PowerLaw,
        }
    }

    pub fn with_hyperparameters(model: &'m Model, hyperparameters: Hyperparameters) -> Result<Self> {
        hyperparameters.validate()?;
        Ok(Valuator {
            model,
            hyperparameters,
            local: PowerLaw,
        })
    }
}

impl<'m, L: LocalValue> Valuator<'m, L> {
    /// Swaps in a different local value curve.
    pub fn with_local_value<M: LocalValue>(self, local: M) -> Valuator<'m, M> {
        Valuator {
            model: self.model,
            hyperparameters: self.hyperparameters,
            local,
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn hyperparameters(&self) -> Hyperparameters {
        self.hyperparameters
    }

    fn local_row(&self, word: &str) -> Vec<f64> {
        self.model
            .categories()
            .iter()
            .map(|c| {
                self.local
                    .local_value(c.frequency(word), c.max_freq(), self.hyperparameters.s)
            })
            .collect()
    }

    /// Every valuation of `word`, one entry per category.
    pub fn valuate(&self, word: &str) -> WordValuation {
        let local = self.local_row(word);
        let med = median(&local);
        let significance: Vec<f64> = local
            .iter()
            .map(|&lv| significance_of(lv, med, self.hyperparameters.l))
            .collect();
        let significant = significance
            .iter()
            .filter(|&&sg| sg >= SIGNIFICANCE_CUTOFF)
            .count();
        let sn = sanction_of(significant, local.len(), self.hyperparameters.p);
        let sanction = vec![sn; local.len()];
        let global = local
            .iter()
            .zip(&significance)
            .map(|(lv, sg)| lv * sg * sn)
            .collect();
        WordValuation {
            local,
            significance,
            sanction,
            global,
        }
    }

    pub fn local_value(&self, word: &str, category: &str) -> Result<f64> {
        let c = self.model.category(category)?;
        Ok(self
            .local
            .local_value(c.frequency(word), c.max_freq(), self.hyperparameters.s))
    }

    pub fn significance(&self, word: &str, category: &str) -> Result<f64> {
        let i = self.model.category_index(category)?;
        Ok(self.valuate(word).significance[i])
    }

    pub fn sanction(&self, word: &str, category: &str) -> Result<f64> {
        let i = self.model.category_index(category)?;
        Ok(self.valuate(word).sanction[i])
    }

    pub fn global_value(&self, word: &str, category: &str) -> Result<f64> {
        let i = self.model.category_index(category)?;
        Ok(self.valuate(word).global[i])
    }

    /// `gv` of `word` for every category, in model order.
    pub fn confidence_vector(&self, word: &str) -> Result<ConfidenceVector> {
        if self.model.is_empty() {
            return Err(Error::EmptyModel);
        }
        Ok(self.valuate(word).global.into())
    }
}

/// Source of word-level confidence vectors for the classification pipeline.
pub trait WordScorer: Sync {
    /// Number of categories, i.e. the length of every vector returned.
    fn dimension(&self) -> usize;

    fn word_vector(&self, token: &str) -> ConfidenceVector;
}

impl<L: LocalValue> WordScorer for Valuator<'_, L> {
    fn dimension(&self) -> usize {
        self.model.num_categories()
    }

    fn word_vector(&self, token: &str) -> ConfidenceVector {
        self.valuate(token).global.into()
    }
}

/// Precomputed word vectors for a fixed vocabulary, falling back to the
/// wrapped scorer for anything else.
pub struct CachedScorer<'a, S: WordScorer> {
    inner: &'a S,
    cache: HashMap<String, ConfidenceVector>,
}

impl<'a, S: WordScorer> CachedScorer<'a, S> {
    pub fn new<I, T>(inner: &'a S, vocabulary: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let mut cache = HashMap::new();
        for word in vocabulary {
            let word = word.into();
            if !cache.contains_key(&word) {
                let vector = inner.word_vector(&word);
                cache.insert(word, vector);
            }
        }
        CachedScorer { inner, cache }
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }
}

impl<S: WordScorer> WordScorer for CachedScorer<'_, S> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn word_vector(&self, token: &str) -> ConfidenceVector {
        match self.cache.get(token) {
            Some(v) => v.clone(),
            None => self.inner.word_vector(token),
        }
    }
}

impl Model {
    /// Valuator bound to this model's own hyperparameters.
    pub fn valuator(&self) -> Valuator<'_> {
        Valuator::new(self)
    }

    pub fn local_value(&self, word: &str, category: &str) -> Result<f64> {
        self.valuator().local_value(word, category)
    }

    pub fn significance(&self, word: &str, category: &str) -> Result<f64> {
        self.valuator().significance(word, category)
    }

    pub fn sanction(&self, word: &str, category: &str) -> Result<f64> {
        self.valuator().sanction(word, category)
    }

    pub fn global_value(&self, word: &str, category: &str) -> Result<f64> {
        self.valuator().global_value(word, category)
    }

    pub fn confidence_vector(&self, word: &str) -> Result<ConfidenceVector> {
        self.valuator().confidence_vector(word)
    }
}
