//! Loaded embeddings and candidate indices shared across requests.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use analogy_core::index::read_term_list;
use analogy_core::{build_candidate_index, CandidateIndex, EmbeddingMatrix};
use analogy_proto::{IndexInfo, IndexRef, LoadIndexRequest};
use parking_lot::RwLock;

use crate::error::ApiError;

pub struct LoadedIndex {
    pub info: IndexInfo,
    pub embeddings: EmbeddingMatrix,
    pub index: CandidateIndex,
}

#[derive(Clone, Default)]
pub struct AppState {
    inner: Arc<Inner>,
}

#[derive(Default)]
struct Inner {
    indices: RwLock<HashMap<String, Arc<LoadedIndex>>>,
    by_source: RwLock<HashMap<LoadIndexRequest, String>>,
    next_id: AtomicU64,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn list(&self) -> Vec<IndexInfo> {
        let mut infos: Vec<IndexInfo> = self.inner.indices.read().values().map(|l| l.info.clone()).collect();
        infos.sort_by(|a, b| a.id.cmp(&b.id));
        infos
    }

    pub fn len(&self) -> usize {
        self.inner.indices.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, id: &str) -> Result<Arc<LoadedIndex>, ApiError> {
        self.inner
            .indices
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("no index with id {id:?}")))
    }

    pub fn remove(&self, id: &str) -> Result<Arc<LoadedIndex>, ApiError> {
        let removed = self
            .inner
            .indices
            .write()
            .remove(id)
            .ok_or_else(|| ApiError::not_found(format!("no index with id {id:?}")))?;
        self.inner.by_source.write().retain(|_, v| v != id);
        Ok(removed)
    }

    /// Returns the cached index for `req`, loading it on a blocking thread
    /// the first time.
    pub async fn load(&self, req: LoadIndexRequest) -> Result<Arc<LoadedIndex>, ApiError> {
        if let Some(id) = self.inner.by_source.read().get(&req) {
            if let Ok(loaded) = self.get(id) {
                return Ok(loaded);
            }
        }
        let id = format!("idx-{}", self.inner.next_id.fetch_add(1, Ordering::Relaxed) + 1);
        let source = req.clone();
        let loaded = tokio::task::spawn_blocking(move || load_index(id, source)).await??;

        // A concurrent request may have loaded the same files first.
        let mut by_source = self.inner.by_source.write();
        if let Some(existing) = by_source
            .get(&req)
            .and_then(|id| self.inner.indices.read().get(id).cloned())
        {
            return Ok(existing);
        }
        let loaded = Arc::new(loaded);
        by_source.insert(req, loaded.info.id.clone());
        self.inner
            .indices
            .write()
            .insert(loaded.info.id.clone(), loaded.clone());
        Ok(loaded)
    }

    pub async fn resolve(&self, index: IndexRef) -> Result<Arc<LoadedIndex>, ApiError> {
        match index {
            IndexRef::Id { id } => self.get(&id),
            IndexRef::Load(req) => self.load(req).await,
        }
    }
}

fn load_index(id: String, req: LoadIndexRequest) -> Result<LoadedIndex, ApiError> {
    let started = std::time::Instant::now();
    let embeddings = EmbeddingMatrix::load(&req.embeddings, req.format)?;
    let terms = read_term_list(&req.candidates)?;
    let index = build_candidate_index(&terms, &embeddings)?;
    tracing::info!(
        %id,
        tokens = embeddings.len(),
        dim = embeddings.dim(),
        entries = index.len(),
        discarded = index.discarded(),
        elapsed_ms = started.elapsed().as_millis() as u64,
        "loaded candidate index"
    );
    Ok(LoadedIndex {
        info: IndexInfo {
            id,
            embeddings: req.embeddings,
            format: req.format,
            candidates: req.candidates,
            tokens: embeddings.len(),
            dim: embeddings.dim(),
            entries: index.len(),
            discarded: index.discarded(),
            duplicates: index.duplicates(),
        },
        embeddings,
        index,
    })
}
