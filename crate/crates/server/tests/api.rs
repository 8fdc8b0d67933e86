mod common;

use common::*;
use serde_json::json;
use ss3::{tokenize, Level};
use ss3_server::api::{DocumentListing, Info, TestDocument};
use ss3_server::{LiveTest, ServerConfig, ServerError};

#[tokio::test]
async fn info_reports_model() {
    let addr = start_default().await;
    let reply = request(addr, "GET", "/api/info", None).await;
    assert_eq!(reply.status, 200);
    assert_same_shape(&reply.json(), &fixture("info"), "info");
    let info: Info = serde_json::from_str(&reply.body).unwrap();
    let m = model();
    assert_eq!(info.categories, ["sports", "tech", "food"]);
    assert_eq!(info.hyperparameters, m.hyperparameters());
    assert_eq!(info.stats.total_tokens, m.total_tokens());
    assert_eq!(info.stats.vocabulary_size, m.vocabulary_size());
    let per_category: u64 = info.stats.categories.iter().map(|c| c.total_tokens).sum();
    assert_eq!(per_category, m.total_tokens());
}

#[tokio::test]
async fn listing_groups_and_flags() {
    let addr = start_default().await;
    let reply = request(addr, "GET", "/api/documents", None).await;
    assert_eq!(reply.status, 200);
    assert_same_shape(&reply.json(), &fixture("documents"), "documents");
    let listing: DocumentListing = serde_json::from_str(&reply.body).unwrap();
    let sports = &listing.groups[0];
    assert_eq!(sports.category, "sports");
    assert_eq!(sports.success, 50.0);
    let wrong: Vec<&TestDocument> = listing.groups.iter().flat_map(|g| &g.documents).filter(|d| !d.correct).collect();
    assert_eq!(wrong.len(), 1);
    assert_eq!(wrong[0].predicted_label, "tech");
    assert_eq!(listing.groups[1].success, 100.0);
    assert_eq!(listing.groups[2].success, 100.0);
}

#[tokio::test]
async fn classify_matches_predict() {
    let addr = start_default().await;
    let text = "The team scored a goal. Meanwhile the chip shipped!\nJam.";
    let body = json!({ "text": text, "level": "word" }).to_string();
    let reply = request(addr, "POST", "/api/classify", Some(&body)).await;
    assert_eq!(reply.status, 200);
    let value = reply.json();
    assert_same_shape(&value, &fixture("classify"), "classify");
    let m = model();
    assert_eq!(value["label"], m.predict([text]).unwrap()[0]);
    let exp: ss3::Explanation = serde_json::from_value(value).unwrap();
    assert_eq!(exp.tree.nodes_at(Level::Word).len(), tokenize(text).len());
    assert_eq!(exp, m.explain(text, Level::Word).unwrap());
}

#[tokio::test]
async fn classify_defaults_and_levels() {
    let addr = start_default().await;
    let reply = request(addr, "POST", "/api/classify", Some(r#"{"text": "goal"}"#)).await;
    assert_eq!(reply.json()["level"], "word");
    let reply = request(addr, "POST", "/api/classify", Some(r#"{"text": "goal. chip", "level": "sentence"}"#)).await;
    let exp: ss3::Explanation = serde_json::from_str(&reply.body).unwrap();
    assert!(exp.tree.nodes_at(Level::Word).is_empty());
    assert_eq!(exp.tree.nodes_at(Level::Sentence).len(), 2);
}

#[tokio::test]
async fn empty_text_is_no_evidence() {
    let addr = start_default().await;
    let reply = request(addr, "POST", "/api/classify", Some(r#"{"text": ""}"#)).await;
    assert_eq!(reply.status, 200);
    let v = reply.json();
    assert_eq!(v["no_evidence"], true);
    assert_eq!(v["confidence"], json!([0.0, 0.0, 0.0]));
    assert_eq!(v["label"], "sports");
}

#[tokio::test]
async fn malformed_bodies_are_rejected() {
    let addr = start_default().await;
    for body in ["{", "[]", r#"{"txt": "x"}"#, r#"{"text": "x", "level": "chapter"}"#] {
        let reply = request(addr, "POST", "/api/classify", Some(body)).await;
        assert_eq!(reply.status, 400, "{body}");
        assert_same_shape(&reply.json(), &fixture("error"), "error");
    }
    let reply = request(addr, "POST", "/api/documents", Some("nope")).await;
    assert_eq!(reply.status, 400);
}

#[tokio::test]
async fn create_edit_and_lookup() {
    let addr = start_default().await;
    let reply = request(addr, "POST", "/api/documents", Some(r#"{"text": "sweet jam", "label": "food"}"#)).await;
    assert_eq!(reply.status, 201);
    assert_same_shape(&reply.json(), &fixture("document"), "document");
    let created: TestDocument = serde_json::from_str(&reply.body).unwrap();
    assert!(created.correct);

    let listing: DocumentListing = serde_json::from_str(&request(addr, "GET", "/api/documents", None).await.body).unwrap();
    assert!(listing.groups[2].documents.iter().any(|d| d.id == created.id));
    assert_eq!(listing.total, 5);

    let path = format!("/api/document/{}", created.id);
    let edited = request(addr, "PUT", &path, Some(r#"{"text": "new phone chip code"}"#)).await;
    assert_eq!(edited.status, 200);
    let edited: TestDocument = serde_json::from_str(&edited.body).unwrap();
    assert!(!edited.correct);
    assert_eq!(edited.predicted_label, "tech");

    let fetched: TestDocument = serde_json::from_str(&request(addr, "GET", &path, None).await.body).unwrap();
    assert_eq!(fetched, edited);

    let listing: DocumentListing = serde_json::from_str(&request(addr, "GET", "/api/documents", None).await.body).unwrap();
    assert_eq!(listing.groups[2].success, 50.0);
}

#[tokio::test]
async fn edit_fixes_misclassified_document() {
    let addr = start_default().await;
    let listing: DocumentListing = serde_json::from_str(&request(addr, "GET", "/api/documents", None).await.body).unwrap();
    let wrong = listing.groups[0].documents.iter().find(|d| !d.correct).unwrap();
    let path = format!("/api/document/{}", wrong.id);
    let reply = request(addr, "PUT", &path, Some(r#"{"text": "late goal for the team"}"#)).await;
    let doc: TestDocument = serde_json::from_str(&reply.body).unwrap();
    assert!(doc.correct);
    let listing: DocumentListing = serde_json::from_str(&request(addr, "GET", "/api/documents", None).await.body).unwrap();
    assert_eq!(listing.groups[0].success, 100.0);
}

#[tokio::test]
async fn unknown_ids_and_labels() {
    let addr = start_default().await;
    assert_eq!(request(addr, "PUT", "/api/document/doc_999", Some(r#"{"text": "x"}"#)).await.status, 404);
    assert_eq!(request(addr, "GET", "/api/document/doc_999", None).await.status, 404);
    let reply = request(addr, "POST", "/api/documents", Some(r#"{"text": "x", "label": "music"}"#)).await;
    assert_eq!(reply.status, 422);
    assert!(reply.json()["error"].as_str().unwrap().contains("music"));
    let reply = request(addr, "PUT", "/api/document/doc_1", Some(r#"{"label": "music"}"#)).await;
    assert_eq!(reply.status, 422);
}

#[tokio::test]
async fn status_page_without_bundle() {
    let addr = start_default().await;
    let reply = request(addr, "GET", "/", None).await;
    assert_eq!(reply.status, 200);
    assert!(reply.body.contains("/api/classify"));
    assert_eq!(request(addr, "GET", "/nope.js", None).await.status, 404);
    assert_eq!(request(addr, "GET", "/api/nope", None).await.status, 404);
}

#[tokio::test]
async fn serves_bundle_when_present() {
    let dir = tempfile::TempDir::new().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html>ui</html>").unwrap();
    std::fs::create_dir(dir.path().join("assets")).unwrap();
    std::fs::write(dir.path().join("assets/app.js"), "console.log(1)").unwrap();
    let config = ServerConfig {
        static_dir: Some(dir.path().to_owned()),
        ..Default::default()
    };
    let addr = start(LiveTest::new(model(), test_set(), config).unwrap()).await;
    let reply = request(addr, "GET", "/", None).await;
    assert_eq!(reply.body, "<html>ui</html>");
    let reply = request(addr, "GET", "/assets/app.js", None).await;
    assert_eq!(reply.status, 200);
    assert!(reply.headers.to_lowercase().contains("text/javascript"));
    assert_eq!(request(addr, "GET", "/assets/missing.js", None).await.status, 404);
    assert_eq!(request(addr, "GET", "/../Cargo.toml", None).await.status, 404);
}

#[tokio::test]
async fn export_writes_corpus_layout() {
    let dir = tempfile::TempDir::new().unwrap();
    let config = ServerConfig {
        export_dir: Some(dir.path().to_owned()),
        ..Default::default()
    };
    let addr = start(LiveTest::new(model(), test_set(), config).unwrap()).await;
    let reply = request(addr, "POST", "/api/documents", Some(r#"{"text": "jam", "label": "food"}"#)).await;
    let doc: TestDocument = serde_json::from_str(&reply.body).unwrap();
    let file = dir.path().join("food").join(format!("{}.txt", doc.id));
    assert_eq!(std::fs::read_to_string(&file).unwrap(), "jam");
    request(addr, "PUT", &format!("/api/document/{}", doc.id), Some(r#"{"label": "tech"}"#)).await;
    assert!(!file.exists());
    assert!(dir.path().join("tech").join(format!("{}.txt", doc.id)).exists());
    let corpus = ss3::load_from_files(dir.path()).unwrap();
    assert_eq!(corpus.y, ["tech"]);
}

#[tokio::test]
async fn concurrent_classify_is_consistent() {
    let addr = start_default().await;
    let body = json!({ "text": "The team scored. The chip and the jam." }).to_string();
    let serial = request(addr, "POST", "/api/classify", Some(&body)).await.body;
    let handles: Vec<_> = (0..32)
        .map(|_| {
            let body = body.clone();
            tokio::spawn(async move { request(addr, "POST", "/api/classify", Some(&body)).await.body })
        })
        .collect();
    for h in handles {
        assert_eq!(h.await.unwrap(), serial);
    }
}

#[test]
fn rejects_bad_startup() {
    let mut corpus = test_set();
    corpus.push("x", "music");
    assert!(matches!(
        LiveTest::new(model(), corpus, ServerConfig::default()),
        Err(ServerError::UnknownLabel { index: 4, .. })
    ));
    let empty = ss3::Model::new(Default::default()).unwrap();
    assert!(matches!(
        LiveTest::new(empty, Default::default(), ServerConfig::default()),
        Err(ServerError::EmptyModel)
    ));
    let ok = LiveTest::new(model(), Default::default(), ServerConfig::default()).unwrap();
    assert_eq!(ok.model().num_categories(), 3);
}
