//! Corpus loading and model persistence.
//!
//! A corpus directory holds one subdirectory per category; every regular file
//! inside a category directory is one document:
//!
//! ```text
//! train/
//!   sports/  1.txt 2.txt
//!   tech/    a.txt
//! ```
//!
//! Models are stored as pretty-printed JSON with words sorted, so the same
//! model always serializes to the same bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CategoryModel, Hyperparameters, Model};

/// Version written to and required from model files.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Documents and their labels, index-aligned.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledCorpus {
    pub x: Vec<String>,
    pub y: Vec<String>,
}

impl LabeledCorpus {
    pub fn new(x: Vec<String>, y: Vec<String>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                y_true: y.len(),
                y_pred: x.len(),
            });
        }
        Ok(LabeledCorpus { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn push(&mut self, text: impl Into<String>, label: impl Into<String>) {
        self.x.push(text.into());
        self.y.push(label.into());
    }

    /// `(text, label)` pairs, ready for [`Model::fit`].
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.x.iter().map(String::as_str).zip(self.y.iter().map(String::as_str))
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<(String, std::path::PathBuf, fs::Metadata)>> {
    let mut entries = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let meta = fs::metadata(&path).map_err(|e| Error::io(&path, e))?;
        entries.push((entry.file_name().to_string_lossy().into_owned(), path, meta));
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(entries)
}

/// Loads a corpus laid out as `path/<label>/<document>`.
///
/// Labels and file names are visited in lexicographic order. Invalid UTF-8 is
/// replaced rather than rejected. Anything nested deeper than one level is
/// ignored, as are plain files directly under `path`.
pub fn load_from_files(path: impl AsRef<Path>) -> Result<LabeledCorpus> {
    let root = path.as_ref();
    let meta = fs::metadata(root).map_err(|e| Error::io(root, e))?;
    if !meta.is_dir() {
        return Err(Error::NotADirectory { path: root.to_owned() });
    }

    let mut corpus = LabeledCorpus::default();
    for (label, dir, meta) in sorted_entries(root)? {
        if !meta.is_dir() {
            continue;
        }
        for (_, file, meta) in sorted_entries(&dir)? {
            if !meta.is_file() {
                continue;
            }
            let bytes = fs::read(&file).map_err(|e| Error::io(&file, e))?;
            corpus.push(String::from_utf8_lossy(&bytes).into_owned(), label.clone());
        }
    }
    Ok(corpus)
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    hyperparameters: Hyperparameters,
    categories: Vec<CategoryFile>,
}

#[derive(Serialize, Deserialize)]
struct CategoryFile {
    name: String,
    max_freq: u64,
    total_tokens: u64,
    word_freq: BTreeMap<String, u64>,
}

/// Serializes a model to its file representation.
pub fn model_to_string(model: &Model) -> String {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        hyperparameters: model.hyperparameters(),
        categories: model
            .categories()
            .iter()
            .map(|c| CategoryFile {
                name: c.name().to_owned(),
                max_freq: c.max_freq(),
                total_tokens: c.total_tokens(),
                word_freq: c.word_freq().iter().map(|(w, &n)| (w.clone(), n)).collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("model serialization cannot fail");
    out.push('\n');
    out
}

/// Parses a model file. The version is checked before anything else.
pub fn model_from_str(text: &str) -> Result<Model> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(Error::ModelFormat)?;
    match value.get("format_version") {
        Some(v) if v.as_u64() == Some(u64::from(MODEL_FORMAT_VERSION)) => {}
        Some(v) => {
            return Err(Error::IncompatibleVersion {
                found: v.to_string(),
                expected: MODEL_FORMAT_VERSION,
            })
        }
        None => {
            return Err(Error::IncompatibleVersion {
                found: "none".to_owned(),
                expected: MODEL_FORMAT_VERSION,
            })
        }
    }
    let file: ModelFile = serde_json::from_value(value).map_err(Error::ModelFormat)?;

    let mut categories = Vec::with_capacity(file.categories.len());
    for c in file.categories {
        if c.word_freq.values().any(|&n| n == 0) {
            return Err(Error::CorruptModel(format!("category `{}` has a zero count", c.name)));
        }
        let category = CategoryModel::from_counts(c.name, c.word_freq);
        if category.max_freq() != c.max_freq || category.total_tokens() != c.total_tokens {
            return Err(Error::CorruptModel(format!(
                "category `{}`: stored totals do not match its counts",
                category.name()
            )));
        }
        categories.push(category);
    }
    Model::from_parts(file.hyperparameters, categories)
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}
