use analogy_core::datagen::{
    generate, read_allowlist, read_frequencies, read_lexicon, read_triples, write_review, write_stats, GenerationConfig,
};
use analogy_core::dataset::write_dataset;
use analogy_core::dataset::{parse_dataset, QueryView};
use analogy_core::evaluate::{evaluate, resolve_query, EvaluateOptions};
use analogy_core::normalize_term;
use analogy_core::report::{outcomes_to_string, render_csv, render_table, summarize_outcomes};
use analogy_core::scoring::{rank, score_all, top_candidate};
use analogy_proto::*;
use axum::extract::{Path, State};
use axum::Json;

use crate::error::{ApiError, ApiResult};
use crate::state::AppState;

pub async fn health(State(state): State<AppState>) -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        indices: state.len(),
    })
}

pub async fn list_indices(State(state): State<AppState>) -> Json<Vec<IndexInfo>> {
    Json(state.list())
}

pub async fn load_index(State(state): State<AppState>, Json(req): Json<LoadIndexRequest>) -> ApiResult<IndexInfo> {
    Ok(Json(state.load(req).await?.info.clone()))
}

pub async fn get_index(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<IndexInfo> {
    Ok(Json(state.get(&id)?.info.clone()))
}

pub async fn delete_index(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<IndexInfo> {
    Ok(Json(state.remove(&id)?.info.clone()))
}

pub async fn normalize(Json(req): Json<NormalizeRequest>) -> Json<NormalizeResponse> {
    Json(NormalizeResponse {
        tokens: normalize_term(&req.term),
    })
}

pub async fn query(State(state): State<AppState>, Json(req): Json<QueryRequest>) -> ApiResult<QueryResponse> {
    req.scoring.validate()?;
    if req.b.is_empty() {
        return Err(ApiError::bad_request("at least one exemplar object is required"));
    }
    let loaded = state.resolve(req.index.clone()).await?;
    let response = tokio::task::spawn_blocking(move || -> Result<QueryResponse, ApiError> {
        let view = QueryView {
            a: &req.a,
            b_used: &req.b,
            c: &req.c,
            d_valid: &[],
        };
        let q = resolve_query(&view, &loaded.embeddings, &loaded.index, req.normalize)
            .map_err(|missing| ApiError::bad_request(format!("out of vocabulary: {}", missing.join(", "))))?;
        let scores = score_all(&req.scoring, &q, &loaded.index)?;
        let top = top_candidate(&scores, &q.exclusions)?;
        let ranked = rank(&scores, None)?;
        let ranking = ranked
            .order
            .iter()
            .take(req.top_k)
            .enumerate()
            .map(|(p, &i)| RankedCandidate {
                rank: p + 1,
                term: loaded.index.surface(i).to_owned(),
                score: scores[i],
                excluded: q.exclusions.binary_search(&i).is_ok(),
            })
            .collect();
        Ok(QueryResponse {
            top_guess: loaded.index.surface(top).to_owned(),
            ranking,
        })
    })
    .await??;
    Ok(Json(response))
}

pub async fn evaluate_dataset(
    State(state): State<AppState>,
    Json(req): Json<EvaluateRequest>,
) -> ApiResult<EvaluateResponse> {
    let options = EvaluateOptions {
        setting: req.setting,
        scoring: req.scoring,
        normalize_queries: req.normalize,
        workers: req.workers,
    };
    options.scoring.validate()?;
    if options.workers == 0 {
        return Err(ApiError::bad_request("worker count must be at least 1"));
    }
    let loaded = state.resolve(req.index).await?;
    let dataset_path = req.dataset;
    let response = tokio::task::spawn_blocking(move || -> Result<EvaluateResponse, ApiError> {
        let dataset = parse_dataset(&dataset_path)?;
        let run = evaluate(&dataset, &loaded.embeddings, &loaded.index, &options)?;
        tracing::info!(
            dataset = %dataset_path,
            scored = run.queries.len(),
            skipped = run.skipped.len(),
            "evaluated dataset"
        );
        let summary = if run.queries.is_empty() {
            None
        } else {
            Some(run.summary()?)
        };
        Ok(EvaluateResponse {
            index: loaded.info.clone(),
            scored: run.queries.len(),
            outcomes: outcomes_to_string(&run),
            table: summary.as_ref().map(render_table).unwrap_or_default(),
            csv: summary.as_ref().map(render_csv).unwrap_or_default(),
            skipped: run.skipped,
            summary,
        })
    })
    .await??;
    Ok(Json(response))
}

pub async fn report(Json(req): Json<ReportRequest>) -> ApiResult<ReportResponse> {
    let summary = summarize_outcomes(&req.outcomes, "outcomes")?;
    Ok(Json(ReportResponse {
        table: render_table(&summary),
        csv: render_csv(&summary),
        summary,
    }))
}

pub async fn generate_dataset(Json(req): Json<GenerateRequest>) -> ApiResult<GenerateResponse> {
    let response = tokio::task::spawn_blocking(move || -> Result<GenerateResponse, ApiError> {
        let config = GenerationConfig {
            min_term_freq: req.min_term_freq,
            min_one_to_one: req.min_one_to_one,
            pairs_per_relation: req.pairs_per_relation,
            seed: req.seed,
            allowlist: req.allowlist.as_deref().map(read_allowlist).transpose()?,
        };
        config.validate()?;
        let triples = read_triples(&req.triples)?;
        let lexicon = read_lexicon(&req.lexicon)?;
        let freqs = read_frequencies(&req.frequencies)?;
        let out = generate(&triples, &lexicon, &freqs, &config)?;

        let text = |f: &dyn Fn(&mut Vec<u8>) -> std::io::Result<()>| -> Result<String, ApiError> {
            let mut buf = Vec::new();
            f(&mut buf).map_err(|e| ApiError::internal(e.to_string()))?;
            String::from_utf8(buf).map_err(|e| ApiError::internal(e.to_string()))
        };
        tracing::info!(
            relations = out.stats.len(),
            analogies = out.total_analogies(),
            "generated dataset"
        );
        Ok(GenerateResponse {
            relations: out.stats.iter().map(|s| s.relation.clone()).collect(),
            total_analogies: out.total_analogies(),
            ids_tsv: text(&|w| write_dataset(w, &out.id_records))?,
            terms_tsv: text(&|w| write_dataset(w, &out.term_records))?,
            stats_tsv: text(&|w| write_stats(w, &out, &config))?,
            review_tsv: text(&|w| write_review(w, &out.review))?,
        })
    })
    .await??;
    Ok(Json(response))
}
