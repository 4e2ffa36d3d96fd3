//! HTTP/JSON front end for analogy evaluation and dataset generation.
//!
//! Candidate indices are expensive to build, so the service keeps every
//! loaded index in memory and shares it across requests; clients refer to
//! it by id or by the files it was built from.

pub mod error;
mod handlers;
pub mod state;

use std::net::SocketAddr;

use axum::routing::{get, post};
use axum::Router;
use tokio::net::TcpListener;
use tokio::task::JoinHandle;

pub use state::AppState;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(handlers::health))
        .route("/v1/indices", get(handlers::list_indices).post(handlers::load_index))
        .route(
            "/v1/indices/{id}",
            get(handlers::get_index).delete(handlers::delete_index),
        )
        .route("/v1/normalize", post(handlers::normalize))
        .route("/v1/query", post(handlers::query))
        .route("/v1/evaluate", post(handlers::evaluate_dataset))
        .route("/v1/report", post(handlers::report))
        .route("/v1/generate", post(handlers::generate_dataset))
        .with_state(state)
}

/// Serves on an already bound listener until the task is dropped or aborted.
pub async fn serve(listener: TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}

/// Binds `addr` and serves in a background task. Returns the bound address,
/// which differs from `addr` when port 0 was requested.
pub async fn spawn(addr: SocketAddr) -> std::io::Result<(SocketAddr, JoinHandle<std::io::Result<()>>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let handle = tokio::spawn(serve(listener, AppState::new()));
    Ok((local, handle))
}
