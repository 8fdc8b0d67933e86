//! Trained model state: hyperparameters and per-category word frequency
//! tables.
//!
//! Frequencies are the only thing training touches, and they do not depend
//! on the hyperparameters. Changing `s`, `l` or `p` on a trained model is
//! therefore free, which is what makes retraining-free grid search possible.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::tokenize;

/// The `(s, l, p)` triple: smoothness, significance and sanction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    /// Smoothness of the local value curve. Must be positive.
    pub s: f64,
    /// How far a local value must rise above the cross-category median to
    /// count as significant. Non-negative.
    pub l: f64,
    /// Severity of the penalty for words significant to several categories.
    /// Non-negative.
    pub p: f64,
}

impl Hyperparameters {
    pub const DEFAULT_S: f64 = 0.45;
    pub const DEFAULT_L: f64 = 0.5;
    pub const DEFAULT_P: f64 = 1.0;

    /// Builds a validated triple.
    pub fn new(s: f64, l: f64, p: f64) -> Result<Self> {
        let hp = Hyperparameters { s, l, p };
        hp.validate()?;
        Ok(hp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s.is_finite() && self.s > 0.0) {
            return Err(Error::InvalidHyperparameters(format!(
                "s must be a positive finite number, got {}",
                self.s
            )));
        }
        if !(self.l.is_finite() && self.l >= 0.0) {
            return Err(Error::InvalidHyperparameters(format!(
                "l must be a non-negative finite number, got {}",
                self.l
            )));
        }
        if !(self.p.is_finite() && self.p >= 0.0) {
            return Err(Error::InvalidHyperparameters(format!(
                "p must be a non-negative finite number, got {}",
                self.p
            )));
        }
        Ok(())
    }
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            s: Self::DEFAULT_S,
            l: Self::DEFAULT_L,
            p: Self::DEFAULT_P,
        }
    }
}

impl fmt::Display for Hyperparameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={} l={} p={}", self.s, self.l, self.p)
    }
}

/// Word frequency table of a single category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryModel {
    name: String,
    word_freq: HashMap<String, u64>,
    max_freq: u64,
    total_tokens: u64,
}

impl CategoryModel {
    pub fn new(name: impl Into<String>) -> Self {
        CategoryModel {
            name: name.into(),
            word_freq: HashMap::new(),
            max_freq: 0,
            total_tokens: 0,
        }
    }

    /// Rebuilds a category from stored counts. Zero counts are dropped and the
    /// derived totals are recomputed, so the invariants hold whatever the
    /// source was.
    pub fn from_counts(name: impl Into<String>, counts: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut category = CategoryModel::new(name);
        for (word, count) in counts {
            category.add(word, count);
        }
        category
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn frequency(&self, word: &str) -> u64 {
        self.word_freq.get(word).copied().unwrap_or(0)
    }

    pub fn max_freq(&self) -> u64 {
        self.max_freq
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn vocabulary_size(&self) -> usize {
        self.word_freq.len()
    }

    pub fn word_freq(&self) -> &HashMap<String, u64> {
        &self.word_freq
    }

    /// Iterates over `(word, count)` in lexicographic word order.
    pub fn sorted_counts(&self) -> Vec<(&str, u64)> {
        let mut counts: Vec<_> = self.word_freq.iter().map(|(w, &c)| (w.as_str(), c)).collect();
        counts.sort_unstable_by(|a, b| a.0.cmp(b.0));
        counts
    }

    fn add(&mut self, word: String, count: u64) {
        if count == 0 {
            return;
        }
        let slot = self.word_freq.entry(word).or_insert(0);
        *slot += count;
        self.max_freq = self.max_freq.max(*slot);
        self.total_tokens += count;
    }
}

/// An SS3 model: categories in first-seen order plus hyperparameters.
///
/// The position of a category in [`Model::categories`] is the index of its
/// component in every confidence vector the model produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    categories: Vec<CategoryModel>,
    index: HashMap<String, usize>,
    hyperparameters: Hyperparameters,
}

impl Model {
    /// An untrained model. Fails when the hyperparameters are out of range.
    pub fn new(hyperparameters: Hyperparameters) -> Result<Self> {
        hyperparameters.validate()?;
        Ok(Model {
            categories: Vec::new(),
            index: HashMap::new(),
            hyperparameters,
        })
    }

    /// Assembles a model from already-built categories, e.g. when loading
    /// from disk. Duplicate names are rejected.
    pub fn from_parts(hyperparameters: Hyperparameters, categories: Vec<CategoryModel>) -> Result<Self> {
        let mut model = Model::new(hyperparameters)?;
        for category in categories {
            if model.index.contains_key(category.name()) {
                return Err(Error::DuplicateCategory(category.name.clone()));
            }
            model.index.insert(category.name.clone(), model.categories.len());
            model.categories.push(category);
        }
        Ok(model)
    }

    pub fn hyperparameters(&self) -> Hyperparameters {
        self.hyperparameters
    }

    pub fn set_hyperparameters(&mut self, hyperparameters: Hyperparameters) -> Result<()> {
        hyperparameters.validate()?;
        self.hyperparameters = hyperparameters;
        Ok(())
    }

    pub fn categories(&self) -> &[CategoryModel] {
        &self.categories
    }

    pub fn category_names(&self) -> Vec<&str> {
        self.categories.iter().map(CategoryModel::name).collect()
    }

    pub fn num_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn category_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownCategory(name.to_owned()))
    }

    pub fn category(&self, name: &str) -> Result<&CategoryModel> {
        Ok(&self.categories[self.category_index(name)?])
    }

    /// Distinct words across all categories.
    pub fn vocabulary_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        for category in &self.categories {
            seen.extend(category.word_freq.keys().map(String::as_str));
        }
        seen.len()
    }

    pub fn total_tokens(&self) -> u64 {
        self.categories.iter().map(CategoryModel::total_tokens).sum()
    }

    /// Trains from scratch: previous counts are discarded, hyperparameters
    /// are kept.
    pub fn fit<I, T, L>(&mut self, docs: I)
    where
        I: IntoIterator<Item = (T, L)>,
        T: AsRef<str>,
        L: AsRef<str>,
    {
        self.categories.clear();
        self.index.clear();
        self.update(docs);
    }

    /// Adds documents to the existing counts. New labels are appended after
    /// the known categories in the order they first appear.
    pub fn update<I, T, L>(&mut self, docs: I)
    where
        I: IntoIterator<Item = (T, L)>,
        T: AsRef<str>,
        L: AsRef<str>,
    {
        for (text, label) in docs {
            let slot = self.ensure_category(label.as_ref());
            let category = &mut self.categories[slot];
            for token in tokenize(text.as_ref()) {
                category.add(token.text, 1);
            }
        }
    }

    fn ensure_category(&mut self, label: &str) -> usize {
        if let Some(&slot) = self.index.get(label) {
            return slot;
        }
        let slot = self.categories.len();
        self.categories.push(CategoryModel::new(label));
        self.index.insert(label.to_owned(), slot);
        slot
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let model = Model::new(Hyperparameters::default()).unwrap();
        assert_eq!(model.num_categories(), 0);
        assert_eq!(model.hyperparameters().s, 0.45);
        assert_eq!(model.hyperparameters().l, 0.5);
        assert_eq!(model.hyperparameters().p, 1.0);
    }

    #[test]
    fn stores_given_hyperparameters() {
        let hp = Hyperparameters::new(0.32, 1.24, 1.1).unwrap();
        let model = Model::new(hp).unwrap();
        assert_eq!(model.hyperparameters(), Hyperparameters { s: 0.32, l: 1.24, p: 1.1 });
    }

    #[test]
    fn rejects_invalid_hyperparameters() {
        assert!(matches!(
            Hyperparameters::new(-1.0, 0.0, 0.0),
            Err(Error::InvalidHyperparameters(_))
        ));
        assert!(Hyperparameters::new(0.0, 0.0, 0.0).is_err());
        assert!(Hyperparameters::new(0.5, -0.1, 0.0).is_err());
        assert!(Hyperparameters::new(0.5, 0.0, -0.1).is_err());
        assert!(Hyperparameters::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(Model::new(Hyperparameters { s: -1.0, l: 0.0, p: 0.0 }).is_err());
        assert!(Hyperparameters::new(0.5, 0.0, 0.0).is_ok());
    }

    #[test]
    fn fit_counts_tokens() {
        let mut model = Model::new(Hyperparameters::default()).unwrap();
        model.fit([("x x y", "A")]);
        let a = model.category("A").unwrap();
        assert_eq!(a.frequency("x"), 2);
        assert_eq!(a.frequency("y"), 1);
        assert_eq!(a.max_freq(), 2);
        assert_eq!(a.total_tokens(), 3);
        assert_eq!(a.vocabulary_size(), 2);
    }

    #[test]
    fn fit_empty_leaves_model_empty() {
        let mut model = Model::new(Hyperparameters::default()).unwrap();
        let before = model.clone();
        model.fit(Vec::<(&str, &str)>::new());
        assert_eq!(model, before);
    }

    #[test]
    fn update_with_nothing_is_identity() {
        let mut model = Model::new(Hyperparameters::default()).unwrap();
        model.fit([("a b c", "A"), ("d", "B")]);
        let before = model.clone();
        model.update(Vec::<(String, String)>::new());
        assert_eq!(model, before);
    }

    #[test]
    fn new_labels_append_in_first_seen_order() {
        let mut model = Model::new(Hyperparameters::default()).unwrap();
        model.fit([("one", "A"), ("two", "B"), ("three", "A")]);
        assert_eq!(model.category_names(), ["A", "B"]);
        model.update([("four", "C"), ("five", "A")]);
        assert_eq!(model.category_names(), ["A", "B", "C"]);
        assert_eq!(model.category_index("C").unwrap(), 2);
    }

    #[test]
    fn fit_resets_previous_counts() {
        let mut model = Model::new(Hyperparameters::default()).unwrap();
        model.fit([("a a", "A")]);
        model.fit([("b", "B")]);
        assert_eq!(model.category_names(), ["B"]);
    }

    #[test]
    fn label_with_no_tokens_still_creates_category() {
        let mut model = Model::new(Hyperparameters::default()).unwrap();
        model.fit([("!!!", "Empty")]);
        let c = model.category("Empty").unwrap();
        assert_eq!(c.max_freq(), 0);
        assert_eq!(c.total_tokens(), 0);
    }

    #[test]
    fn unknown_category_lookup() {
        let model = Model::new(Hyperparameters::default()).unwrap();
        assert!(matches!(model.category("nope"), Err(Error::UnknownCategory(_))));
    }

    #[test]
    fn from_parts_rejects_duplicates() {
        let parts = vec![CategoryModel::new("A"), CategoryModel::new("A")];
        assert!(Model::from_parts(Hyperparameters::default(), parts).is_err());
    }

    #[test]
    fn from_counts_recomputes_totals() {
        let c = CategoryModel::from_counts("A", [("x".to_owned(), 3), ("y".to_owned(), 0), ("z".to_owned(), 5)]);
        assert_eq!(c.max_freq(), 5);
        assert_eq!(c.total_tokens(), 8);
        assert_eq!(c.vocabulary_size(), 2);
    }
}
