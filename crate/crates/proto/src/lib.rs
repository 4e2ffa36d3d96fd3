//! Wire types for the analogy evaluation service.
//!
//! Every endpoint takes and returns JSON. File paths in requests are
//! resolved on the server's filesystem; generated files and reports come
//! back as strings so that clients decide where to write them.
//!
//! | Method | Path                | Request            | Response           |
//! | ------ | ------------------- | ------------------ | ------------------ |
//! | GET    | `/health`           |                    | `Health`           |
//! | GET    | `/v1/indices`       |                    | `Vec<IndexInfo>`   |
//! | POST   | `/v1/indices`       | `LoadIndexRequest` | `IndexInfo`        |
//! | GET    | `/v1/indices/{id}`  |                    | `IndexInfo`        |
//! | DELETE | `/v1/indices/{id}`  |                    | `IndexInfo`        |
//! | POST   | `/v1/normalize`     | `NormalizeRequest` | `NormalizeResponse`|
//! | POST   | `/v1/query`         | `QueryRequest`     | `QueryResponse`    |
//! | POST   | `/v1/evaluate`      | `EvaluateRequest`  | `EvaluateResponse` |
//! | POST   | `/v1/report`        | `ReportRequest`    | `ReportResponse`   |
//! | POST   | `/v1/generate`      | `GenerateRequest`  | `GenerateResponse` |
//!
//! Failures use a non-2xx status with an [`ErrorBody`].

use serde::{Deserialize, Serialize};

pub use analogy_core::evaluate::SkippedQuery;
pub use analogy_core::metrics::Summary;
pub use analogy_core::{EmbeddingFormat, EvaluationSetting, Method, ScoringMethod};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
    pub indices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LoadIndexRequest {
    pub embeddings: String,
    pub format: EmbeddingFormat,
    pub candidates: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexInfo {
    pub id: String,
    pub embeddings: String,
    pub format: EmbeddingFormat,
    pub candidates: String,
    pub tokens: usize,
    pub dim: usize,
    pub entries: usize,
    pub discarded: usize,
    pub duplicates: usize,
}

/// A loaded index by id, or the files to load (reusing a cached index built
/// from the same files).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexRef {
    Id { id: String },
    Load(LoadIndexRequest),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizeRequest {
    pub term: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizeResponse {
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRequest {
    pub index: IndexRef,
    pub a: String,
    pub b: Vec<String>,
    pub c: String,
    pub scoring: ScoringMethod,
    #[serde(default = "default_true")]
    pub normalize: bool,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    /// 1-based position in the full ranking.
    pub rank: usize,
    pub term: String,
    pub score: f64,
    /// The candidate is one of the query terms.
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    /// Best candidate other than the query terms.
    pub top_guess: String,
    /// Leading entries of the full ranking.
    pub ranking: Vec<RankedCandidate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateRequest {
    pub index: IndexRef,
    pub dataset: String,
    pub setting: EvaluationSetting,
    pub scoring: ScoringMethod,
    #[serde(default = "default_true")]
    pub normalize: bool,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateResponse {
    pub index: IndexInfo,
    pub scored: usize,
    pub skipped: Vec<SkippedQuery>,
    /// Absent when every analogy was skipped; `table` and `csv` are empty then.
    pub summary: Option<Summary>,
    /// Outcome file contents, accepted by `/v1/report`.
    pub outcomes: String,
    pub table: String,
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRequest {
    pub outcomes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportResponse {
    pub summary: Summary,
    pub table: String,
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub triples: String,
    pub lexicon: String,
    pub frequencies: String,
    #[serde(default)]
    pub allowlist: Option<String>,
    pub min_term_freq: u64,
    pub min_one_to_one: usize,
    pub pairs_per_relation: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateResponse {
    pub relations: Vec<String>,
    pub total_analogies: usize,
    /// Dataset over concept ids.
    pub ids_tsv: String,
    /// Dataset over representative terms.
    pub terms_tsv: String,
    pub stats_tsv: String,
    pub review_tsv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

fn default_true() -> bool {
    true
}

fn default_top_k() -> usize {
    10
}

fn default_workers() -> usize {
    1
}
