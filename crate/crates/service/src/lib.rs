//! HTTP service for exploring mutations of an exchange matrix step by step.
//!
//! Sessions live in memory. Each one starts from the framed matrix `[B; I]`
//! and records the directions applied so far; every snapshot is checked by
//! replaying that history from the initial matrix.
//!
//! | Method | Path | Body |
//! |---|---|---|
//! | POST | `/api/sessions` | matrix document (JSON or text grid) |
//! | GET | `/api/sessions/{id}` | |
//! | POST | `/api/sessions/{id}/mutations` | `{"k": 2}` |
//! | POST | `/api/sessions/{id}/undo` | |
//! | GET | `/api/sessions/{id}/decomposition` | |
//! | POST | `/api/sessions/{id}/search` | `{"target": "mgs", "maxDepth": 8}` |

mod error;
mod routes;
mod session;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::Router;
use tokio::net::TcpListener;

pub use error::ApiError;
pub use session::{Session, SessionStore, Snapshot};

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Sessions untouched for this long are dropped.
    pub idle_timeout: Duration,
    /// Wall-clock limit for one search request.
    pub search_timeout: Duration,
    /// Largest `maxDepth` a search request may ask for.
    pub max_search_depth: usize,
    /// Directory with the browser bundle; a built-in page is served when
    /// unset.
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            idle_timeout: Duration::from_secs(60 * 60),
            search_timeout: Duration::from_secs(30),
            max_search_depth: 32,
            static_dir: None,
        }
    }
}

#[derive(Clone)]
pub struct AppState {
    pub sessions: Arc<SessionStore>,
    pub config: Arc<ServiceConfig>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        Self {
            sessions: Arc::new(SessionStore::new(config.idle_timeout)),
            config: Arc::new(config),
        }
    }
}

pub fn router(state: AppState) -> Router {
    routes::router(state)
}

/// Serves on `listener` until the process stops, sweeping idle sessions in
/// the background.
pub async fn serve(listener: TcpListener, config: ServiceConfig) -> std::io::Result<()> {
    let state = AppState::new(config);
    let sessions = state.sessions.clone();
    let sweep_every = (state.config.idle_timeout / 4).max(Duration::from_secs(1));
    tokio::spawn(async move {
        let mut ticker = tokio::time::interval(sweep_every);
        loop {
            ticker.tick().await;
            let evicted = sessions.evict_idle();
            if evicted > 0 {
                tracing::debug!(evicted, "dropped idle sessions");
            }
        }
    });
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state)).await
}
