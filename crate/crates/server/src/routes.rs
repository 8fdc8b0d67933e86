use std::path::{Component, Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use ss3::Level;

use crate::api::{CategoryStats, ClassifyRequest, DocumentEdit, ErrorBody, Info, ModelStats, NewDocument, TestDocument};
use crate::LiveTest;

type Shared = Arc<LiveTest>;

struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { error: self.1 })).into_response()
    }
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError(StatusCode::BAD_REQUEST, format!("malformed request body: {e}")))
}

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/api/info", get(info))
        .route("/api/documents", get(list_documents).post(create_document))
        .route("/api/document/{id}", get(get_document).put(edit_document))
        .route("/api/classify", axum::routing::post(classify))
        .route("/api/{*rest}", axum::routing::any(api_not_found))
        .route("/", get(index))
        .route("/{*path}", get(static_file))
        .with_state(state)
}

async fn info(State(state): State<Shared>) -> Json<Info> {
    let model = state.model();
    Json(Info {
        categories: model.category_names().into_iter().map(str::to_owned).collect(),
        hyperparameters: model.hyperparameters(),
        stats: ModelStats {
            vocabulary_size: model.vocabulary_size(),
            total_tokens: model.total_tokens(),
            categories: model
                .categories()
                .iter()
                .map(|c| CategoryStats {
                    name: c.name().to_owned(),
                    vocabulary_size: c.vocabulary_size(),
                    total_tokens: c.total_tokens(),
                    max_freq: c.max_freq(),
                })
                .collect(),
        },
    })
}

async fn list_documents(State(state): State<Shared>) -> impl IntoResponse {
    let store = state.documents.read().expect("document store poisoned");
    Json(store.listing(state.model()))
}

async fn get_document(State(state): State<Shared>, UrlPath(id): UrlPath<String>) -> Result<Json<TestDocument>, ApiError> {
    let store = state.documents.read().expect("document store poisoned");
    store
        .get(&id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no document with id `{id}`")))
}

fn check_label(state: &LiveTest, label: &str) -> Result<(), ApiError> {
    state
        .model()
        .category_index(label)
        .map(|_| ())
        .map_err(|_| ApiError(StatusCode::UNPROCESSABLE_ENTITY, format!("unknown label `{label}`")))
}

fn export(state: &LiveTest, doc: &TestDocument, previous_label: Option<&str>) -> Result<(), ApiError> {
    let Some(dir) = &state.config.export_dir else {
        return Ok(());
    };
    let write = || -> std::io::Result<()> {
        if let Some(old) = previous_label.filter(|old| *old != doc.true_label) {
            let stale = dir.join(old).join(format!("{}.txt", doc.id));
            if stale.exists() {
                std::fs::remove_file(stale)?;
            }
        }
        let category = dir.join(&doc.true_label);
        std::fs::create_dir_all(&category)?;
        std::fs::write(category.join(format!("{}.txt", doc.id)), &doc.text)
    };
    write().map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, format!("export failed: {e}")))
}

async fn create_document(State(state): State<Shared>, body: Bytes) -> Result<(StatusCode, Json<TestDocument>), ApiError> {
    let req: NewDocument = parse_body(&body)?;
    check_label(&state, &req.label)?;
    let doc = {
        let mut store = state.documents.write().expect("document store poisoned");
        store.insert(state.model(), req.text, req.label)
    };
    export(&state, &doc, None)?;
    Ok((StatusCode::CREATED, Json(doc)))
}

async fn edit_document(
    State(state): State<Shared>,
    UrlPath(id): UrlPath<String>,
    body: Bytes,
) -> Result<Json<TestDocument>, ApiError> {
    let req: DocumentEdit = parse_body(&body)?;
    if let Some(label) = &req.label {
        check_label(&state, label)?;
    }
    let (previous, doc) = {
        let mut store = state.documents.write().expect("document store poisoned");
        let previous = store.get(&id).map(|d| d.true_label.clone());
        let doc = store
            .edit(state.model(), &id, req.text, req.label)
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no document with id `{id}`")))?;
        (previous, doc)
    };
    export(&state, &doc, previous.as_deref())?;
    Ok(Json(doc))
}

async fn classify(State(state): State<Shared>, body: Bytes) -> Result<Response, ApiError> {
    let req: ClassifyRequest = parse_body(&body)?;
    let explanation = state
        .model()
        .explain(&req.text, req.level.unwrap_or(Level::Word))
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(explanation).into_response())
}

async fn api_not_found() -> ApiError {
    ApiError(StatusCode::NOT_FOUND, "no such endpoint".to_owned())
}

const STATUS_PAGE: &str = "<!DOCTYPE html>\n<html lang=\"en\">\n<head><meta charset=\"utf-8\"><title>SS3 Live Test</title></head>\n\
<body>\n<h1>SS3 Live Test</h1>\n<p>The API is live. The web UI has not been built, so only the JSON endpoints are available:</p>\n\
<ul>\n<li><code>GET /api/info</code></li>\n<li><code>GET /api/documents</code></li>\n\
<li><code>POST /api/classify</code> with <code>{\"text\": \"...\", \"level\": \"word\"}</code></li>\n\
<li><code>POST /api/documents</code>, <code>PUT /api/document/{id}</code></li>\n</ul>\n</body>\n</html>\n";

async fn index(State(state): State<Shared>) -> Response {
    if let Some(dir) = &state.config.static_dir {
        if let Some(resp) = serve_file(&dir.join("index.html")).await {
            return resp;
        }
    }
    Html(STATUS_PAGE).into_response()
}

async fn static_file(State(state): State<Shared>, UrlPath(path): UrlPath<String>) -> Response {
    let not_found = || (StatusCode::NOT_FOUND, "not found").into_response();
    let Some(dir) = &state.config.static_dir else {
        return not_found();
    };
    let Some(relative) = safe_relative(&path) else {
        return not_found();
    };
    serve_file(&dir.join(relative)).await.unwrap_or_else(not_found)
}

/// Rejects absolute paths and any `..` or root components.
fn safe_relative(path: &str) -> Option<PathBuf> {
    let candidate = Path::new(path);
    if candidate.components().all(|c| matches!(c, Component::Normal(_))) {
        Some(candidate.to_path_buf())
    } else {
        None
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        Some("ico") => "image/x-icon",
        Some("woff2") => "font/woff2",
        _ => "application/octet-stream",
    }
}

async fn serve_file(path: &Path) -> Option<Response> {
    if !tokio::fs::metadata(path).await.ok()?.is_file() {
        return None;
    }
    let bytes = tokio::fs::read(path).await.ok()?;
    Some(([(header::CONTENT_TYPE, content_type(path))], bytes).into_response())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_sanitizing() {
        assert!(safe_relative("assets/app.js").is_some());
        assert!(safe_relative("../secret").is_none());
        assert!(safe_relative("a/../../b").is_none());
        assert!(safe_relative("/etc/passwd").is_none());
    }
}
