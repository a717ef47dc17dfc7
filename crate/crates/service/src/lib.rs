//! HTTP facade over the meter identifier.
//!
//! * `POST /identify` takes `{text, mode?, scheme?, k?}` and returns the
//!   detailed export.
//! * `GET /meters` lists the loaded meters, sorted by name.
//! * `GET /health` reports readiness; 503 until the database is loaded.

use std::sync::{Arc, OnceLock};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chanda_core::pipeline::export::to_json;
use chanda_core::pipeline::DetailedReport;
use chanda_core::{analyze, MetricalDatabase, Mode, Scheme, DEFAULT_K};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub const DEFAULT_MAX_TEXT_BYTES: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct Config {
    /// Largest accepted `text`, in bytes.
    pub max_text_bytes: usize,
    /// Origins allowed to call the API from a browser. Empty disables CORS.
    pub allowed_origins: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_text_bytes: DEFAULT_MAX_TEXT_BYTES,
            allowed_origins: Vec::new(),
        }
    }
}

/// Shared state. The database is set once, possibly after the server has
/// started accepting connections.
#[derive(Debug, Default)]
pub struct AppState {
    db: OnceLock<MetricalDatabase>,
    max_text_bytes: usize,
}

impl AppState {
    pub fn new(config: &Config) -> Arc<Self> {
        Arc::new(AppState {
            db: OnceLock::new(),
            max_text_bytes: config.max_text_bytes,
        })
    }

    /// Install the database. Returns false if one was already set.
    pub fn set_database(&self, db: MetricalDatabase) -> bool {
        self.db.set(db).is_ok()
    }

    pub fn database(&self) -> Option<&MetricalDatabase> {
        self.db.get()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentifyRequest {
    pub text: String,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "auto")]
    pub scheme: String,
    #[serde(default = "default_k")]
    pub k: usize,
}

fn auto() -> String {
    "auto".into()
}

fn default_k() -> usize {
    DEFAULT_K
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeterInfo {
    pub name: String,
    pub name_latin: String,
    pub patterns: Vec<String>,
    pub syllable_counts: Vec<usize>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn unavailable() -> Self {
        Self::new(StatusCode::SERVICE_UNAVAILABLE, "meter database is still loading")
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

async fn health(State(state): State<Arc<AppState>>) -> Response {
    let version = env!("CARGO_PKG_VERSION");
    match state.database() {
        Some(db) => Json(json!({ "status": "ok", "version": version, "meters": db.len() })).into_response(),
        None => (
            StatusCode::SERVICE_UNAVAILABLE,
            Json(json!({ "status": "loading", "version": version })),
        )
            .into_response(),
    }
}

pub fn meter_list(db: &MetricalDatabase) -> Vec<MeterInfo> {
    let mut list: Vec<MeterInfo> = db
        .meters()
        .map(|m| MeterInfo {
            name: m.name.clone(),
            name_latin: m.name_latin.clone(),
            patterns: m.pada_patterns.iter().map(ToString::to_string).collect(),
            syllable_counts: m.pada_patterns.iter().map(|p| p.len()).collect(),
        })
        .collect();
    list.sort_by(|a, b| (&a.name, &a.name_latin).cmp(&(&b.name, &b.name_latin)));
    list
}

async fn meters(State(state): State<Arc<AppState>>) -> Result<Json<Vec<MeterInfo>>, ApiError> {
    let db = state.database().ok_or_else(ApiError::unavailable)?;
    Ok(Json(meter_list(db)))
}

fn parse_request(body: &[u8], max_text_bytes: usize) -> Result<(IdentifyRequest, Option<Scheme>), ApiError> {
    let req: IdentifyRequest = serde_json::from_slice(body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("malformed request body: {e}")))?;
    if req.text.len() > max_text_bytes {
        return Err(ApiError::new(
            StatusCode::PAYLOAD_TOO_LARGE,
            format!("text exceeds {max_text_bytes} bytes"),
        ));
    }
    if req.text.trim().is_empty() {
        return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "text is empty"));
    }
    if req.k == 0 {
        return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "k must be at least 1"));
    }
    let scheme = if req.scheme.eq_ignore_ascii_case("auto") {
        None
    } else {
        Some(
            req.scheme
                .parse::<Scheme>()
                .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?,
        )
    };
    Ok((req, scheme))
}

async fn identify(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    if state.database().is_none() {
        return Err(ApiError::unavailable());
    }
    let (req, scheme) = parse_request(&body, state.max_text_bytes)?;
    let worker = Arc::clone(&state);
    let result = tokio::task::spawn_blocking(move || {
        let db = worker.database().expect("checked above");
        analyze(&req.text, scheme, req.mode, db, req.k).map(|r| to_json(&DetailedReport::from_report(&r)))
    })
    .await;
    match result {
        Ok(Ok(json)) => Ok(([(header::CONTENT_TYPE, "application/json")], json).into_response()),
        Ok(Err(e)) => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())),
        Err(_) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal error")),
    }
}

fn cors(origins: &[String]) -> Option<CorsLayer> {
    let origins: Vec<HeaderValue> = origins
        .iter()
        .filter_map(|o| HeaderValue::from_str(o.trim()).ok())
        .collect();
    if origins.is_empty() {
        return None;
    }
    Some(
        CorsLayer::new()
            .allow_origin(AllowOrigin::list(origins))
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([header::CONTENT_TYPE]),
    )
}

pub fn router(state: Arc<AppState>, config: &Config) -> Router {
    // JSON escaping can expand text up to six-fold
    let body_limit = config.max_text_bytes.saturating_mul(6).saturating_add(64 * 1024);
    let app = Router::new()
        .route("/health", get(health))
        .route("/meters", get(meters))
        .route("/identify", post(identify))
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(state);
    match cors(&config.allowed_origins) {
        Some(layer) => app.layer(layer),
        None => app,
    }
}
