use ss3::Model;

use crate::api::{success_percentage, DocumentGroup, DocumentListing, TestDocument};

/// Test documents with their current predictions.
#[derive(Debug, Default)]
pub struct DocumentStore {
    documents: Vec<TestDocument>,
    next_id: usize,
}

fn predict(model: &Model, text: &str) -> String {
    model.classify(text).expect("server models are never empty").label
}

impl DocumentStore {
    pub fn insert(&mut self, model: &Model, text: String, label: String) -> TestDocument {
        self.next_id += 1;
        let predicted_label = predict(model, &text);
        let doc = TestDocument {
            id: format!("doc_{}", self.next_id),
            correct: predicted_label == label,
            text,
            true_label: label,
            predicted_label,
        };
        self.documents.push(doc.clone());
        doc
    }

    pub fn get(&self, id: &str) -> Option<&TestDocument> {
        self.documents.iter().find(|d| d.id == id)
    }

    /// Applies the edit and re-predicts. `None` when `id` is unknown.
    pub fn edit(&mut self, model: &Model, id: &str, text: Option<String>, label: Option<String>) -> Option<TestDocument> {
        let doc = self.documents.iter_mut().find(|d| d.id == id)?;
        if let Some(text) = text {
            doc.predicted_label = predict(model, &text);
            doc.text = text;
        }
        if let Some(label) = label {
            doc.true_label = label;
        }
        doc.correct = doc.predicted_label == doc.true_label;
        Some(doc.clone())
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Groups by true label in model category order. Percentages are computed
    /// from the stored predictions on every call.
    pub fn listing(&self, model: &Model) -> DocumentListing {
        let groups: Vec<DocumentGroup> = model
            .category_names()
            .into_iter()
            .map(|category| {
                let documents: Vec<TestDocument> = self
                    .documents
                    .iter()
                    .filter(|d| d.true_label == category)
                    .cloned()
                    .collect();
                let correct = documents.iter().filter(|d| d.correct).count();
                DocumentGroup {
                    category: category.to_owned(),
                    total: documents.len(),
                    correct,
                    success: success_percentage(correct, documents.len()),
                    documents,
                }
            })
            .collect();
        let total = groups.iter().map(|g| g.total).sum();
        let correct = groups.iter().map(|g| g.correct).sum();
        DocumentListing {
            total,
            correct,
            success: success_percentage(correct, total),
            groups,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ss3::Hyperparameters;

    fn model() -> Model {
        let mut m = Model::new(Hyperparameters::default()).unwrap();
        m.fit([("apple pear", "food"), ("goal team", "sports"), ("chip code", "tech")]);
        m
    }

    #[test]
    fn percentages() {
        let m = model();
        let mut store = DocumentStore::default();
        store.insert(&m, "apple".into(), "food".into());
        store.insert(&m, "pear".into(), "food".into());
        store.insert(&m, "goal".into(), "sports".into());
        store.insert(&m, "chip code".into(), "sports".into());
        let listing = store.listing(&m);
        assert_eq!(listing.groups.len(), 3);
        assert_eq!(listing.groups[0].success, 100.0);
        assert_eq!(listing.groups[1].success, 50.0);
        assert_eq!(listing.groups[2].success, 0.0);
        assert_eq!(listing.groups[2].total, 0);
        assert!(!listing.groups[1].documents[1].correct);
        assert_eq!(listing.groups[1].documents[1].predicted_label, "tech");
        assert_eq!(listing.total, 4);
        assert_eq!(listing.success, 75.0);
    }

    #[test]
    fn edits_refresh_prediction() {
        let m = model();
        let mut store = DocumentStore::default();
        let doc = store.insert(&m, "apple".into(), "sports".into());
        assert!(!doc.correct);
        let edited = store.edit(&m, &doc.id, Some("team goal".into()), None).unwrap();
        assert!(edited.correct);
        assert_eq!(store.listing(&m).groups[1].success, 100.0);
        let relabeled = store.edit(&m, &doc.id, None, Some("tech".into())).unwrap();
        assert!(!relabeled.correct);
        assert!(store.edit(&m, "doc_99", None, None).is_none());
    }
}
