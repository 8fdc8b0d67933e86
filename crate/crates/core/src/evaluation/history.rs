use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::metrics::{ConfusionMatrix, Metrics};
use crate::error::{Error, Result};
use crate::model::Hyperparameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    Test,
    Kfold,
    GridPoint,
}

/// One evaluation as stored in the history file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub kind: RecordKind,
    pub hyperparameters: Hyperparameters,
    pub metrics: Metrics,
    pub confusion: ConfusionMatrix,
    pub data_fingerprint: String,
    pub timestamp: String,
    /// For k-fold records: the fold count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// For k-fold records: the fold index, absent on the aggregate record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fold: Option<usize>,
}

/// Current time in the format records use.
pub fn now_timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// SHA-256 over the documents and labels, in order. Identical corpora give
/// identical fingerprints.
pub fn data_fingerprint<S: AsRef<str>>(x: &[S], y: &[S]) -> String {
    let mut hasher = Sha256::new();
    for (text, label) in x.iter().zip(y) {
        for part in [label.as_ref(), text.as_ref()] {
            hasher.update((part.len() as u64).to_le_bytes());
            hasher.update(part.as_bytes());
        }
    }
    hex::encode(hasher.finalize())
}

/// Serializes a record as a single history line, without the newline.
pub fn record_to_line(record: &EvaluationRecord) -> String {
    serde_json::to_string(record).expect("record serialization cannot fail")
}

/// Appends records to the history file, creating it if needed. All records
/// go out in one write.
pub fn history_append_all(records: &[EvaluationRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = String::new();
    for record in records {
        buf.push_str(&record_to_line(record));
        buf.push('\n');
    }
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    file.write_all(buf.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn history_append(record: &EvaluationRecord, path: impl AsRef<Path>) -> Result<()> {
    history_append_all(std::slice::from_ref(record), path)
}

/// Reads every record. Any line that does not parse, blank lines included,
/// fails the whole load with its 1-based line number.
pub fn history_load(path: impl AsRef<Path>) -> Result<Vec<EvaluationRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|source| Error::HistoryRecord {
                path: path.to_owned(),
                line: i + 1,
                source,
            })
        })
        .collect()
}
