//! Drives the HTTP API in-process: upload P*, compile it, open a session,
//! ask for badges and a what-if, then commit a losing move.
//!
//!     cargo run -p qcsp-service --example http_session

use axum::body::Body;
use axum::http::{Method, Request};
use http_body_util::BodyExt;
use qcsp_service::{router, FileStore};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &axum::Router, method: Method, uri: &str, body: Value) -> Value {
    let request = Request::builder().method(method.clone()).uri(uri).body(Body::from(body.to_string())).unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value: Value = serde_json::from_slice(&bytes).unwrap();
    println!("{method} {uri} -> {status}\n  {value}");
    value
}

#[tokio::main]
async fn main() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(FileStore::open(dir.path()).unwrap(), None);
    let problem: Value = serde_json::from_str(include_str!("../../core/fixtures/pstar.json")).unwrap();

    let created = call(&app, Method::POST, "/problems", problem).await;
    let id = created["id"].as_str().unwrap();
    let compiled = call(&app, Method::POST, &format!("/problems/{id}/compile"), json!({})).await;
    let base_id = compiled["base_id"].as_str().unwrap();

    let game = call(&app, Method::POST, "/games", json!({ "base_id": base_id, "human_role": "exists" })).await;
    let game_id = game["id"].as_str().unwrap();
    call(&app, Method::POST, &format!("/games/{game_id}/move"), json!({ "variable": "x", "value": 2 })).await;
    call(&app, Method::GET, &format!("/games/{game_id}/winning-moves"), Value::Null).await;
    call(&app, Method::POST, &format!("/games/{game_id}/whatif"), json!({ "value": 2 })).await;
    call(&app, Method::POST, &format!("/games/{game_id}/move"), json!({ "value": 2 })).await;
    call(&app, Method::POST, &format!("/games/{game_id}/move"), json!({ "value": 0 })).await;
}
