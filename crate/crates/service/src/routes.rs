use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::Html;
use axum::routing::{get, post};
use axum::{Json, Router};
use greenseq_core::green::DEFAULT_SEARCH_DEPTH;
use greenseq_core::{
    decompose, find_sequence, parse_matrix, BlockDecomposition, SearchConfig, SearchResult,
    SearchTarget, Strategy,
};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::error::ApiError;
use crate::session::{Session, Snapshot};
use crate::AppState;

const INDEX_PAGE: &str = include_str!("../static/index.html");

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/mutations", post(apply_mutation))
        .route("/api/sessions/{id}/undo", post(undo))
        .route("/api/sessions/{id}/decomposition", get(decomposition))
        .route("/api/sessions/{id}/search", post(search));
    let api = match &state.config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(INDEX_PAGE) })),
    };
    api.with_state(state)
}

async fn create_session(
    State(state): State<AppState>,
    body: String,
) -> Result<(StatusCode, Json<Snapshot>), ApiError> {
    let doc = parse_matrix(&body).map_err(ApiError::InvalidMatrix)?;
    if doc.attached.is_some() {
        return Err(ApiError::BadRequest(
            "sessions start from the framed matrix; drop the attached rows".into(),
        ));
    }
    let session = Session::new(doc.exchange);
    let snapshot = session.snapshot()?;
    state.sessions.insert(session);
    Ok((StatusCode::CREATED, Json(snapshot)))
}

async fn get_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Snapshot>, ApiError> {
    let handle = state.sessions.get(&id)?;
    let session = handle.lock().await;
    Ok(Json(session.snapshot()?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MutationRequest {
    k: usize,
}

async fn apply_mutation(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<MutationRequest>,
) -> Result<Json<Snapshot>, ApiError> {
    let handle = state.sessions.get(&id)?;
    let mut session = handle.lock().await;
    session.mutate(req.k)?;
    Ok(Json(session.snapshot()?))
}

async fn undo(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Snapshot>, ApiError> {
    let handle = state.sessions.get(&id)?;
    let mut session = handle.lock().await;
    session.undo()?;
    Ok(Json(session.snapshot()?))
}

async fn decomposition(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<BlockDecomposition>, ApiError> {
    let handle = state.sessions.get(&id)?;
    let session = handle.lock().await;
    Ok(Json(decompose(&session.initial)))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SearchRequest {
    target: SearchTarget,
    max_depth: Option<usize>,
    #[serde(default)]
    strategy: Strategy,
}

/// Searches from the session's initial matrix. A search cut short by the
/// time or state budget is reported as exhausted to the last fully searched
/// depth, with `budgetExceeded` set.
async fn search(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<SearchRequest>,
) -> Result<Json<Value>, ApiError> {
    let max_depth = req.max_depth.unwrap_or(DEFAULT_SEARCH_DEPTH);
    if max_depth > state.config.max_search_depth {
        return Err(ApiError::BadRequest(format!(
            "maxDepth {max_depth} exceeds the limit of {}",
            state.config.max_search_depth
        )));
    }
    let config = SearchConfig {
        max_depth,
        strategy: req.strategy,
        timeout: Some(state.config.search_timeout),
        ..SearchConfig::default()
    };
    let handle = state.sessions.get(&id)?;
    let session = handle.lock().await;
    let initial = session.initial.clone();
    let target = req.target;
    let outcome = tokio::task::spawn_blocking(move || find_sequence(&initial, target, &config))
        .await
        .map_err(|e| ApiError::Task(e.to_string()))??;
    drop(session);

    let mut body = serde_json::to_value(&outcome).expect("search outcomes serialize");
    match outcome.result {
        SearchResult::OutOfBudget {
            budget,
            depth_completed,
        } => {
            body["result"] = json!("exhaustedToDepth");
            body["depth"] = json!(depth_completed);
            body["budget"] = json!(budget);
            body["budgetExceeded"] = json!(true);
            if let Some(obj) = body.as_object_mut() {
                obj.remove("depthCompleted");
            }
        }
        _ => body["budgetExceeded"] = json!(false),
    }
    body["target"] = json!(target);
    Ok(Json(body))
}
