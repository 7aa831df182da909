//! Read-only dereference endpoint: `GET /entity/{kind}/{localId}` returns
//! the entity's description as canonical quads.

use std::io;
use std::net::{IpAddr, SocketAddr};
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use thiserror::Error;
use tokio::net::TcpListener;

use etd_core::ingest::mint_iri;
use etd_core::io::describe_entity;
use etd_core::{EntityKind, Iri, Store};

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("port {0} is already in use")]
    PortInUse(u16),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone)]
struct AppState {
    store: Arc<Store>,
    base: Iri,
}

/// Description document of `kind/local_id`, if the entity exists.
pub fn description_body(store: &Store, base: &Iri, segment: &str, local_id: &str) -> Option<String> {
    let kind = EntityKind::from_segment(segment)?;
    let iri = mint_iri(base, kind, local_id).ok()?;
    if store.kind_of(&iri) != Some(kind) {
        return None;
    }
    let description = describe_entity(store, &iri).ok()?;
    Some(description.to_quads(store, base).to_string())
}

async fn entity(State(state): State<AppState>, Path((segment, local_id)): Path<(String, String)>) -> Response {
    match description_body(&state.store, &state.base, &segment, &local_id) {
        Some(body) => ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], body).into_response(),
        None => (StatusCode::NOT_FOUND, "not found\n").into_response(),
    }
}

async fn health() -> &'static str {
    "ok"
}

/// Routes over an immutable store. Methods other than GET (and HEAD) on a
/// known route answer 405.
pub fn router(store: Arc<Store>, base: Iri) -> Router {
    Router::new()
        .route("/entity/{kind}/{local_id}", get(entity))
        .route("/health", get(health))
        .with_state(AppState { store, base })
}

/// Binds `host:port`, mapping an occupied port to `PortInUse`.
pub async fn bind(host: IpAddr, port: u16) -> Result<TcpListener, ServeError> {
    TcpListener::bind(SocketAddr::from((host, port)))
        .await
        .map_err(|e| match e.kind() {
            io::ErrorKind::AddrInUse => ServeError::PortInUse(port),
            _ => ServeError::Io(e),
        })
}

pub async fn serve(listener: TcpListener, store: Arc<Store>, base: Iri) -> Result<(), ServeError> {
    axum::serve(listener, router(store, base)).await?;
    Ok(())
}
