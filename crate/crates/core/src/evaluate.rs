//! Evaluation of a whole dataset against a candidate index.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{apply_setting, Dataset, EvaluationSetting, QueryView};
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::index::CandidateIndex;
use crate::metrics::{relaxed_accuracy_hit, summarize, QueryOutcome, Summary};
use crate::scoring::{score_all, target_positions, top_candidate, ResolvedQuery, ScoringMethod};
use crate::terms::compose_term;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluateOptions {
    pub setting: EvaluationSetting,
    pub scoring: ScoringMethod,
    /// Unit-normalize the composed `a`, `b` and `c` vectors before scoring.
    pub normalize_queries: bool,
    pub workers: usize,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        EvaluateOptions {
            setting: EvaluationSetting::MultiAnswer,
            scoring: ScoringMethod::cos_add(),
            normalize_queries: true,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedQuery {
    /// Position of the record in the dataset.
    pub record: usize,
    pub relation: String,
    pub top_guess: String,
    pub outcome: QueryOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedQuery {
    pub record: usize,
    pub line: usize,
    pub relation: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRun {
    pub options: EvaluateOptions,
    /// Scored queries in dataset order.
    pub queries: Vec<EvaluatedQuery>,
    pub skipped: Vec<SkippedQuery>,
}

impl EvaluationRun {
    /// Outcomes grouped by relation, relations in order of first appearance.
    pub fn groups(&self) -> Vec<(String, Vec<QueryOutcome>)> {
        group_outcomes(self.queries.iter().map(|q| (q.relation.as_str(), &q.outcome)))
    }

    pub fn summary(&self) -> Result<Summary> {
        summarize(&self.groups())
    }
}

pub(crate) fn group_outcomes<'a>(
    items: impl Iterator<Item = (&'a str, &'a QueryOutcome)>,
) -> Vec<(String, Vec<QueryOutcome>)> {
    let mut groups: Vec<(String, Vec<QueryOutcome>)> = Vec::new();
    let mut slot = std::collections::HashMap::new();
    for (relation, outcome) in items {
        let k = *slot.entry(relation.to_owned()).or_insert_with(|| {
            groups.push((relation.to_owned(), Vec::new()));
            groups.len() - 1
        });
        groups[k].1.push(outcome.clone());
    }
    groups
}

/// Composes the query-side terms of `view`. Returns the terms that have no
/// in-vocabulary token when any exist.
pub fn resolve_query(
    view: &QueryView<'_>,
    emb: &EmbeddingMatrix,
    index: &CandidateIndex,
    normalize: bool,
) -> std::result::Result<ResolvedQuery, Vec<String>> {
    let mut missing = Vec::new();
    let mut vector = |term: &str| -> Option<Vec<f64>> {
        let composed = compose_term(term, emb);
        let Some(mut v) = composed.vector else {
            missing.push(term.to_owned());
            return None;
        };
        if normalize {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.0 {
                v.iter_mut().for_each(|x| *x /= n);
            }
        }
        Some(v)
    };
    let a = vector(view.a);
    let b: Vec<Option<Vec<f64>>> = view.b_used.iter().map(|t| vector(t)).collect();
    let c = vector(view.c);
    if !missing.is_empty() {
        return Err(missing);
    }

    let exclusions = std::iter::once(view.a)
        .chain(view.b_used.iter().map(String::as_str))
        .chain(std::iter::once(view.c))
        .filter_map(|t| index.lookup(t))
        .collect();
    let b = b.into_iter().map(Option::unwrap).collect();
    Ok(ResolvedQuery::new(a.unwrap(), b, c.unwrap(), exclusions)
        .expect("composed vectors share the embedding dimension"))
}

/// Scores one resolved query and derives its outcome.
pub fn evaluate_query(
    q: &ResolvedQuery,
    view: &QueryView<'_>,
    index: &CandidateIndex,
    scoring: &ScoringMethod,
    n_answers: usize,
) -> Result<(usize, QueryOutcome)> {
    let scores = score_all(scoring, q, index)?;
    let top = top_candidate(&scores, &q.exclusions)?;
    let mut answers: Vec<usize> = view.d_valid.iter().filter_map(|d| index.lookup(d)).collect();
    answers.sort_unstable();
    answers.dedup();
    let answer_positions = target_positions(&scores, &answers);
    Ok((
        top,
        QueryOutcome {
            top_guess_correct: relaxed_accuracy_hit(top, &answers),
            n_answers_in_index: answer_positions.len(),
            answer_positions,
            n_valid: view.d_valid.len(),
            n_answers,
        },
    ))
}

enum Scored {
    Done(EvaluatedQuery),
    Skipped(SkippedQuery),
}

/// Evaluates every record of `dataset`. Records with a query-side term that
/// has no in-vocabulary token are skipped and reported.
pub fn evaluate(
    dataset: &Dataset,
    emb: &EmbeddingMatrix,
    index: &CandidateIndex,
    options: &EvaluateOptions,
) -> Result<EvaluationRun> {
    options.scoring.validate()?;
    if options.workers == 0 {
        return Err(Error::Config("worker count must be at least 1".into()));
    }
    if emb.dim() != index.dim() {
        return Err(Error::DimensionMismatch {
            expected: index.dim(),
            found: emb.dim(),
        });
    }

    let run_one = |i: usize| -> Result<Scored> {
        let record = &dataset.records[i];
        let line = dataset.lines.get(i).copied().unwrap_or(0);
        let view = apply_setting(record, options.setting);
        let skip = |reason: String| {
            Ok(Scored::Skipped(SkippedQuery {
                record: i,
                line,
                relation: record.relation.clone(),
                reason,
            }))
        };
        let q = match resolve_query(&view, emb, index, options.normalize_queries) {
            Ok(q) => q,
            Err(missing) => return skip(format!("out of vocabulary: {}", missing.join(", "))),
        };
        match evaluate_query(&q, &view, index, &options.scoring, record.d_list.len()) {
            Ok((top, outcome)) => {
                if outcome.n_answers_in_index == 0 {
                    log::warn!(
                        "record {} ({}): no valid answer is in the candidate index",
                        i,
                        record.relation
                    );
                }
                Ok(Scored::Done(EvaluatedQuery {
                    record: i,
                    relation: record.relation.clone(),
                    top_guess: index.surface(top).to_owned(),
                    outcome,
                }))
            }
            Err(Error::AllExcluded) => skip("every candidate is excluded".into()),
            Err(e) => Err(e),
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let scored: Vec<Scored> =
        pool.install(|| (0..dataset.len()).into_par_iter().map(run_one).collect::<Result<_>>())?;

    let mut run = EvaluationRun {
        options: *options,
        queries: Vec::with_capacity(scored.len()),
        skipped: Vec::new(),
    };
    for s in scored {
        match s {
            Scored::Done(q) => run.queries.push(q),
            Scored::Skipped(s) => {
                log::warn!("skipping line {} ({}): {}", s.line, s.relation, s.reason);
                run.skipped.push(s);
            }
        }
    }
    Ok(run)
}
