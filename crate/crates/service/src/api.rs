//! The HTTP routes.
//!
//! Every handler reads its inputs from the file store, so a restarted
//! server picks up where it left off. Moves on one session are serialized
//! by a per-session lock; reads see the last written snapshot.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use qcsp::{compile, CompileOptions, Problem, Propagation, QcspBase, Quantifier, TieBreak, Value};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as JsonValue};
use tower_http::cors::{Any, CorsLayer};

use crate::error::ApiError;
use crate::game::{Game, SessionState};
use crate::store::{BaseRecord, FileStore, StatsDoc};

pub struct AppState {
    store: FileStore,
    sessions: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

impl AppState {
    pub fn new(store: FileStore) -> Self {
        AppState { store, sessions: Mutex::new(HashMap::new()) }
    }

    fn session_lock(&self, id: &str) -> Arc<tokio::sync::Mutex<()>> {
        let mut map = self.sessions.lock().expect("session map lock");
        map.entry(id.to_string()).or_default().clone()
    }
}

type Shared = Arc<AppState>;

/// The full API. `cors_origin` restricts cross-origin access to one origin;
/// `None` allows any.
pub fn router(store: FileStore, cors_origin: Option<&str>) -> Router {
    let cors = match cors_origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(origin) => CorsLayer::new().allow_origin(origin),
        None => CorsLayer::new().allow_origin(Any),
    }
    .allow_methods(Any)
    .allow_headers(Any);

    Router::new()
        .route("/problems", post(create_problem))
        .route("/problems/:id", get(get_problem))
        .route("/problems/:id/compile", post(compile_problem))
        .route("/bases/:id", get(get_base))
        .route("/games", post(create_game))
        .route("/games/:id", get(get_game))
        .route("/games/:id/move", post(play_move))
        .route("/games/:id/winning-moves", get(winning_moves))
        .route("/games/:id/whatif", post(whatif))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "NotFound", "no such route") })
        .layer(cors)
        .with_state(Arc::new(AppState::new(store)))
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request("MalformedJson", e.to_string()))
}

async fn create_problem(State(app): State<Shared>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::bad_request("MalformedJson", e.to_string()))?;
    let problem = Problem::from_json(text)?;
    let id = app.store.put_problem(&problem)?;
    Ok((StatusCode::CREATED, Json(json!({ "id": id, "binder": problem.binder_string() }))))
}

async fn get_problem(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<JsonValue>, ApiError> {
    let problem = app.store.problem(&id)?;
    Ok(Json(serde_json::to_value(problem.to_doc()).expect("problems serialize")))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompileRequest {
    #[serde(default)]
    propagation: Option<String>,
    #[serde(default)]
    budget: Option<u64>,
}

#[derive(Debug, Serialize)]
struct CompileResponse {
    base_id: String,
    problem_id: String,
    winning: bool,
    kind: &'static str,
    stats: StatsDoc,
}

async fn compile_problem(
    State(app): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<CompileResponse>, ApiError> {
    let request: CompileRequest =
        if body.iter().all(u8::is_ascii_whitespace) { Default::default() } else { parse_body(&body)? };
    let propagation = match request.propagation.as_deref() {
        None => Propagation::default(),
        Some(s) => s.parse().map_err(|e: String| ApiError::bad_request("BadOption", e))?,
    };
    let problem = app.store.problem(&id)?;
    let options = CompileOptions { propagation, budget: request.budget };
    let (base, stats) = tokio::task::spawn_blocking(move || compile(&problem, options))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))??;

    let kind = match base {
        QcspBase::Top => "top",
        QcspBase::Bottom => "bottom",
        QcspBase::Pair(_) => "pair",
    };
    let record = BaseRecord {
        problem_id: id.clone(),
        propagation: propagation.to_string(),
        stats: stats.into(),
        base: serde_json::from_str(&base.to_json()).expect("base JSON parses"),
    };
    let base_id = app.store.put_base(&record)?;
    Ok(Json(CompileResponse { base_id, problem_id: id, winning: !base.is_bottom(), kind, stats: record.stats }))
}

async fn get_base(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<BaseRecord>, ApiError> {
    Ok(Json(app.store.base(&id)?))
}

/// A session's problem and base, loaded for one request.
struct Loaded {
    problem: Problem,
    base: QcspBase,
}

impl Loaded {
    fn for_base(store: &FileStore, base_id: &str) -> Result<(Self, String), ApiError> {
        let record = store.base(base_id)?;
        let base = record.base()?;
        let problem = store.problem(&record.problem_id)?;
        Ok((Loaded { problem, base }, record.problem_id))
    }

    fn game(&self) -> Game<'_> {
        Game::new(&self.problem, &self.base)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateGame {
    base_id: String,
    human_role: Quantifier,
    #[serde(default)]
    tie_break: TieBreak,
}

async fn create_game(State(app): State<Shared>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let request: CreateGame = parse_body(&body)?;
    let (loaded, problem_id) = Loaded::for_base(&app.store, &request.base_id)?;
    let id = uuid::Uuid::new_v4().to_string();
    let state = loaded.game().start(id, problem_id, request.base_id, request.human_role, request.tie_break)?;
    app.store.put_session(&state)?;
    Ok((StatusCode::CREATED, Json(state)))
}

async fn get_game(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionState>, ApiError> {
    Ok(Json(app.store.session(&id)?))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRequest {
    value: Value,
    #[serde(default)]
    variable: Option<String>,
}

async fn play_move(
    State(app): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SessionState>, ApiError> {
    let request: MoveRequest = parse_body(&body)?;
    let lock = app.session_lock(&id);
    let _guard = lock.lock().await;
    let mut state = app.store.session(&id)?;
    let (loaded, _) = Loaded::for_base(&app.store, &state.base_id)?;
    loaded.game().play(&mut state, request.variable.as_deref(), request.value)?;
    app.store.put_session(&state)?;
    Ok(Json(state))
}

#[derive(Debug, Serialize)]
struct WinningMoves {
    variable: String,
    values: BTreeSet<Value>,
}

async fn winning_moves(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<WinningMoves>, ApiError> {
    let state = app.store.session(&id)?;
    let (loaded, _) = Loaded::for_base(&app.store, &state.base_id)?;
    let values = loaded.game().winning_moves(&state)?;
    let variable = state.turn.map(|t| t.variable).unwrap_or_default();
    Ok(Json(WinningMoves { variable, values }))
}

async fn whatif(State(app): State<Shared>, Path(id): Path<String>, body: Bytes) -> Result<Json<JsonValue>, ApiError> {
    let request: MoveRequest = parse_body(&body)?;
    let state = app.store.session(&id)?;
    let (loaded, _) = Loaded::for_base(&app.store, &state.base_id)?;
    let winning = loaded.game().whatif(&state, request.variable.as_deref(), request.value)?;
    let variable = state.turn.map(|t| t.variable).unwrap_or_default();
    Ok(Json(json!({ "variable": variable, "value": request.value, "winning": winning })))
}

/// Serves the API until the process is stopped.
pub async fn serve(port: u16, data_dir: &std::path::Path, cors_origin: Option<&str>) -> std::io::Result<()> {
    let store = FileStore::open(data_dir)?;
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}, data in {}", listener.local_addr()?, data_dir.display());
    axum::serve(listener, router(store, cors_origin)).await
}
