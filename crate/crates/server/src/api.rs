//! Request and response bodies. Field names here are the wire contract the
//! web UI is built against.

use serde::{Deserialize, Serialize};
use ss3::{Hyperparameters, Level};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Info {
    /// Category names in confidence-vector order.
    pub categories: Vec<String>,
    pub hyperparameters: Hyperparameters,
    pub stats: ModelStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelStats {
    /// Distinct words across all categories.
    pub vocabulary_size: usize,
    pub total_tokens: u64,
    pub categories: Vec<CategoryStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryStats {
    pub name: String,
    pub vocabulary_size: usize,
    pub total_tokens: u64,
    pub max_freq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestDocument {
    pub id: String,
    pub text: String,
    pub true_label: String,
    pub predicted_label: String,
    /// `false` marks a misclassified document.
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentGroup {
    pub category: String,
    pub total: usize,
    pub correct: usize,
    /// Percentage of correctly classified documents, 0 for an empty group.
    pub success: f64,
    pub documents: Vec<TestDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentListing {
    pub total: usize,
    pub correct: usize,
    pub success: f64,
    /// One group per model category, in model order.
    pub groups: Vec<DocumentGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyRequest {
    pub text: String,
    /// Deepest level to return; defaults to `word`.
    #[serde(default)]
    pub level: Option<Level>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewDocument {
    pub text: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentEdit {
    #[serde(default)]
    pub text: Option<String>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

pub fn success_percentage(correct: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * correct as f64 / total as f64
    }
}
