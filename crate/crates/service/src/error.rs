use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use qcsp::{CompileError, ModelError, QueryError};
use serde_json::json;

use crate::game::GameError;
use crate::store::StoreError;

/// An error response: an HTTP status, a stable code and a human-readable
/// detail, sent as `{"error": code, "detail": detail}`.
#[derive(Debug, thiserror::Error)]
#[error("{code}: {detail}")]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub detail: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, detail: impl Into<String>) -> Self {
        ApiError { status, code, detail: detail.into() }
    }

    pub fn bad_request(code: &'static str, detail: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, detail)
    }

    pub fn internal(detail: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.code, "detail": self.detail }))).into_response()
    }
}

pub fn model_error_code(e: &ModelError) -> &'static str {
    match e {
        ModelError::DuplicateVariable(_) => "DuplicateVariable",
        ModelError::EmptyDomain(_) => "EmptyDomain",
        ModelError::DuplicateDomainValue { .. } => "DuplicateDomainValue",
        ModelError::UnknownVariableInScope { .. } => "UnknownVariableInScope",
        ModelError::ArityMismatch { .. } => "ArityMismatch",
        ModelError::ValueOutOfDomain { .. } => "ValueOutOfDomain",
        ModelError::Expr { .. } => "ExprSyntax",
        ModelError::IncompleteAssignment(_) => "IncompleteAssignment",
        ModelError::UnknownVariable(_) => "UnknownVariable",
        ModelError::Json { .. } => "MalformedJson",
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        ApiError::bad_request(model_error_code(&e), e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound { .. } => ApiError::new(StatusCode::NOT_FOUND, "NotFound", e.to_string()),
            _ => ApiError::internal(e.to_string()),
        }
    }
}

impl From<CompileError> for ApiError {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::BudgetExceeded(_) => ApiError::new(StatusCode::CONFLICT, "BudgetExceeded", e.to_string()),
            _ => ApiError::internal(e.to_string()),
        }
    }
}

impl From<GameError> for ApiError {
    fn from(e: GameError) -> Self {
        let detail = e.to_string();
        match e {
            GameError::GameOver(_) => ApiError::new(StatusCode::CONFLICT, "GameOver", detail),
            GameError::OutOfTurn => ApiError::new(StatusCode::CONFLICT, "OutOfTurn", detail),
            GameError::WrongVariable { .. } => ApiError::new(StatusCode::CONFLICT, "OutOfTurn", detail),
            GameError::ValueOutOfDomain { .. } | GameError::Query(QueryError::ValueOutOfDomain { .. }) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "ValueOutOfDomain", detail)
            }
            GameError::Query(_) => ApiError::internal(detail),
        }
    }
}
