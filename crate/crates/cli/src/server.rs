//! Read-only HTTP JSON service over one shared snapshot.

use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use vison_core::discovery::{ApiError, ErrorClass, QueryResponse, ToolDetail};
use vison_core::export::GraphExport;
use vison_core::Discovery;

use crate::load_snapshot;

/// The current snapshot. Handlers clone the inner `Arc` and drop the lock
/// before doing any work, so a reload swaps between requests.
#[derive(Clone)]
pub struct AppState {
    current: Arc<RwLock<Arc<Discovery>>>,
    source: Option<PathBuf>,
}

impl AppState {
    pub fn new(discovery: Discovery, source: Option<PathBuf>) -> Self {
        AppState { current: Arc::new(RwLock::new(Arc::new(discovery))), source }
    }

    pub fn snapshot(&self) -> Arc<Discovery> {
        self.current.read().expect("snapshot lock poisoned").clone()
    }

    /// Re-reads the snapshot file. On failure the old snapshot stays live.
    pub fn reload(&self) -> Result<usize, String> {
        let path = self.source.as_ref().ok_or("no snapshot file to reload from")?;
        let d = Discovery::new(load_snapshot(path)?);
        let tools = d.tools().len();
        *self.current.write().expect("snapshot lock poisoned") = Arc::new(d);
        Ok(tools)
    }
}

struct HttpError(ApiError);

impl From<ApiError> for HttpError {
    fn from(e: ApiError) -> Self {
        HttpError(e)
    }
}

impl IntoResponse for HttpError {
    fn into_response(self) -> Response {
        let status = match self.0.class {
            ErrorClass::BadRequest => StatusCode::BAD_REQUEST,
            ErrorClass::NotFound => StatusCode::NOT_FOUND,
            ErrorClass::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(self.0.body())).into_response()
    }
}

fn bad_request(message: String) -> HttpError {
    HttpError(ApiError::new(ErrorClass::BadRequest, "bad-request", message))
}

type ApiResult<T> = Result<Json<T>, HttpError>;

#[derive(Debug, Deserialize)]
pub struct QueryBody {
    pub query: String,
}

#[derive(Debug, Deserialize)]
pub struct GraphParams {
    pub root: Option<String>,
    pub depth: Option<usize>,
}

#[derive(Debug, Serialize)]
struct Health {
    status: &'static str,
    tools: usize,
}

async fn health(State(s): State<AppState>) -> Json<Health> {
    Json(Health { status: "ok", tools: s.snapshot().tools().len() })
}

async fn tools(State(s): State<AppState>) -> impl IntoResponse {
    Json(s.snapshot().tools())
}

async fn tool(State(s): State<AppState>, Path(slug): Path<String>) -> ApiResult<ToolDetail> {
    Ok(Json(s.snapshot().tool(&slug)?))
}

async fn query(
    State(s): State<AppState>,
    body: Result<Json<QueryBody>, JsonRejection>,
) -> ApiResult<QueryResponse> {
    let Json(body) = body.map_err(|e| bad_request(e.body_text()))?;
    Ok(Json(s.snapshot().query(&body.query)?))
}

async fn facets(State(s): State<AppState>) -> impl IntoResponse {
    Json(s.snapshot().facets())
}

async fn graph(
    State(s): State<AppState>,
    params: Result<Query<GraphParams>, QueryRejection>,
) -> ApiResult<GraphExport> {
    let Query(p) = params.map_err(|e| bad_request(e.body_text()))?;
    let root = p.root.as_deref().unwrap_or(vison_core::ontology::ROOT);
    Ok(Json(s.snapshot().graph(root, p.depth.unwrap_or(1))?))
}

async fn metrics(State(s): State<AppState>) -> impl IntoResponse {
    Json(s.snapshot().metrics())
}

async fn sankey(State(s): State<AppState>) -> impl IntoResponse {
    Json(s.snapshot().sankey())
}

async fn not_found() -> HttpError {
    HttpError(ApiError::new(ErrorClass::NotFound, "not-found", "no such endpoint"))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/tools", get(tools))
        .route("/api/tools/{slug}", get(tool))
        .route("/api/query", post(query))
        .route("/api/facets", get(facets))
        .route("/api/graph", get(graph))
        .route("/api/metrics", get(metrics))
        .route("/api/sankey", get(sankey))
        .fallback(not_found)
        .with_state(state)
}

#[cfg(unix)]
fn spawn_reload_on_hangup(state: AppState) {
    use tokio::signal::unix::{signal, SignalKind};
    tokio::spawn(async move {
        let Ok(mut hup) = signal(SignalKind::hangup()) else { return };
        while hup.recv().await.is_some() {
            match state.reload() {
                Ok(n) => eprintln!("reloaded snapshot ({n} tools)"),
                Err(e) => eprintln!("reload failed, keeping previous snapshot: {e}"),
            }
        }
    });
}

#[cfg(not(unix))]
fn spawn_reload_on_hangup(_state: AppState) {}

/// Binds and serves until interrupted.
pub async fn serve(state: AppState, bind: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    spawn_reload_on_hangup(state.clone());
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown_signal())
        .await
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        use tokio::signal::unix::{signal, SignalKind};
        match signal(SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
}
