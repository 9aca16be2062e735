use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use tower_http::services::ServeDir;

use crate::app::{ApiError, Endpoint, Service};
use crate::error::ErrorCode;

const PLACEHOLDER_INDEX: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>curriculum-bn</title></head>
<body><h1>curriculum-bn</h1>
<p>No static directory was given. JSON API: GET /api/model; POST /api/infer, /api/map,
/api/joint, /api/impact, /api/plan, /api/whatif.</p></body></html>
";

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error_response(e: &ApiError) -> Response {
    let status = StatusCode::from_u16(e.code.http_status()).unwrap_or(StatusCode::BAD_REQUEST);
    json_response(status, e.to_json())
}

async fn run(service: Arc<Service>, endpoint: Endpoint, body: Bytes) -> Response {
    let Ok(text) = String::from_utf8(body.to_vec()) else {
        return error_response(&ApiError::new(ErrorCode::ParseError, "request body is not UTF-8", "body"));
    };
    let result = tokio::task::spawn_blocking(move || service.handle(endpoint, &text)).await;
    match result {
        Ok(Ok(body)) => json_response(StatusCode::OK, body),
        Ok(Err(e)) => error_response(&e),
        Err(join) => json_response(
            StatusCode::INTERNAL_SERVER_ERROR,
            ApiError::new(ErrorCode::UsageError, format!("handler failed: {join}"), "").to_json(),
        ),
    }
}

fn post_route(endpoint: Endpoint) -> axum::routing::MethodRouter<Arc<Service>> {
    post(move |State(s): State<Arc<Service>>, body: Bytes| run(s, endpoint, body))
}

/// Routes of the JSON API, plus static files under `/` from `static_dir`
/// (or a placeholder index page when none is given).
pub fn router(service: Arc<Service>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route(
            "/api/model",
            get(|State(s): State<Arc<Service>>| async move {
                json_response(StatusCode::OK, s.handle(Endpoint::Model, "").expect("model export"))
            }),
        )
        .route("/api/infer", post_route(Endpoint::Infer))
        .route("/api/map", post_route(Endpoint::Map))
        .route("/api/joint", post_route(Endpoint::Joint))
        .route("/api/impact", post_route(Endpoint::Impact))
        .route("/api/plan", post_route(Endpoint::Plan))
        .route("/api/whatif", post_route(Endpoint::Whatif))
        .with_state(service);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(PLACEHOLDER_INDEX) })),
    }
}

/// Binds `addr` and serves until interrupted.
pub async fn serve(service: Service, addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(service), static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
