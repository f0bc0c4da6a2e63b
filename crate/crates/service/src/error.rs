use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use greenseq_core::Error as CoreError;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("no session with id {0}")]
    UnknownSession(String),

    #[error("nothing to undo")]
    EmptyHistory,

    #[error("invalid matrix: {0}")]
    InvalidMatrix(CoreError),

    #[error("{0}")]
    BadRequest(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("search task failed: {0}")]
    Task(String),
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            Self::UnknownSession(_) => StatusCode::NOT_FOUND,
            Self::EmptyHistory => StatusCode::CONFLICT,
            Self::InvalidMatrix(_) | Self::BadRequest(_) => StatusCode::BAD_REQUEST,
            Self::Core(CoreError::InternalSignViolation(_)) | Self::Task(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            Self::Core(_) => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::UnknownSession(_) => "unknownSession",
            Self::EmptyHistory => "emptyHistory",
            Self::InvalidMatrix(CoreError::Parse { .. }) => "parseError",
            Self::InvalidMatrix(_) => "invalidMatrix",
            Self::BadRequest(_) => "badRequest",
            Self::Core(CoreError::IndexOutOfRange { .. }) => "indexOutOfRange",
            Self::Core(CoreError::ArithmeticOverflow(_)) => "arithmeticOverflow",
            Self::Core(CoreError::InternalSignViolation(_)) => "internalSignViolation",
            Self::Core(_) => "invalidRequest",
            Self::Task(_) => "internal",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.kind(), "message": self.to_string() });
        if let Self::InvalidMatrix(CoreError::Parse { line, column, .. }) = &self {
            body["line"] = json!(line);
            body["column"] = json!(column);
        }
        (self.status(), Json(body)).into_response()
    }
}
