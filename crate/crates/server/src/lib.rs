//! HTTP backend of the Live Test tool.
//!
//! Serves a trained [`ss3::Model`] together with an in-memory set of test
//! documents. The model is shared read-only between requests; only the
//! document store changes, through `POST /api/documents` and
//! `PUT /api/document/{id}`.
//!
//! | method | path                   | body                   | response                |
//! |--------|------------------------|------------------------|-------------------------|
//! | GET    | `/api/info`            |                        | [`api::Info`]           |
//! | GET    | `/api/documents`       |                        | [`api::DocumentListing`]|
//! | GET    | `/api/document/{id}`   |                        | [`api::TestDocument`]   |
//! | POST   | `/api/classify`        | [`api::ClassifyRequest`] | [`ss3::Explanation`]  |
//! | POST   | `/api/documents`       | [`api::NewDocument`]   | [`api::TestDocument`]   |
//! | PUT    | `/api/document/{id}`   | [`api::DocumentEdit`]  | [`api::TestDocument`]   |
//! | GET    | `/`, `/{*path}`        |                        | web UI or status page   |
//!
//! Errors are returned as `{"error": "..."}` with a 4xx status.

pub mod api;
mod routes;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use ss3::{LabeledCorpus, Model};
use thiserror::Error;
use tokio::net::TcpListener;

pub use routes::router;
pub use store::DocumentStore;

pub const DEFAULT_PORT: u16 = 8050;

#[derive(Debug, Error)]
pub enum ServerError {
    #[error("the model has no categories; train it before starting the server")]
    EmptyModel,
    #[error("test document {index} has label `{label}`, which the model does not know")]
    UnknownLabel { index: usize, label: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Default)]
pub struct ServerConfig {
    /// Directory with the built web UI (`index.html` and assets).
    pub static_dir: Option<PathBuf>,
    /// When set, created and edited documents are also written to
    /// `<dir>/<label>/<id>.txt`.
    pub export_dir: Option<PathBuf>,
}

/// Shared state behind every handler.
pub struct LiveTest {
    model: Arc<Model>,
    documents: RwLock<DocumentStore>,
    config: ServerConfig,
}

impl LiveTest {
    /// Loads the test set and computes its predictions. Every test label must
    /// be one of the model's categories.
    pub fn new(model: Model, test_set: LabeledCorpus, config: ServerConfig) -> Result<Arc<Self>, ServerError> {
        if model.is_empty() {
            return Err(ServerError::EmptyModel);
        }
        let model = Arc::new(model);
        let mut documents = DocumentStore::default();
        for (index, (text, label)) in test_set.pairs().enumerate() {
            if model.category_index(label).is_err() {
                return Err(ServerError::UnknownLabel {
                    index,
                    label: label.to_owned(),
                });
            }
            documents.insert(&model, text.to_owned(), label.to_owned());
        }
        Ok(Arc::new(LiveTest {
            model,
            documents: RwLock::new(documents),
            config,
        }))
    }

    pub fn model(&self) -> &Model {
        &self.model
    }
}

/// Binds `addr` and serves until the returned future is dropped or ctrl-c
/// is received.
pub async fn serve(listener: TcpListener, state: Arc<LiveTest>) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub async fn bind(addr: SocketAddr) -> std::io::Result<TcpListener> {
    TcpListener::bind(addr).await
}
