//! Analogy-completion evaluation for word embeddings with multiple correct
//! answers, multiple exemplar objects and rank-based metrics, plus balanced
//! analogy dataset generation from relation triples.

pub mod datagen;
pub mod dataset;
pub mod embedding;
pub mod error;
pub mod evaluate;
pub mod index;
pub mod metrics;
pub mod report;
pub mod scoring;
pub mod terms;

pub use dataset::{AnalogyRecord, Dataset, EvaluationSetting, QueryView};
pub use embedding::{EmbeddingFormat, EmbeddingMatrix};
pub use error::{Error, Result};
pub use evaluate::{evaluate, EvaluateOptions, EvaluationRun};
pub use index::{build_candidate_index, CandidateIndex};
pub use metrics::{QueryOutcome, Summary};
pub use scoring::{Method, ScoringMethod};
pub use terms::{compose_term, normalize_term, ComposedTerm};
