//! Relaxed accuracy, average precision and reciprocal rank, aggregated per
//! relation and across relations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What one analogy query produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryOutcome {
    /// Top guess of the ranking with the query terms excluded is a valid answer.
    pub top_guess_correct: bool,
    /// Sorted 1-based positions of the valid answers in the full ranking.
    pub answer_positions: Vec<usize>,
    /// Valid answers present in the candidate index.
    pub n_answers_in_index: usize,
    /// Valid answers under the evaluation setting.
    pub n_valid: usize,
    /// Size of the record's full answer list.
    pub n_answers: usize,
}

impl QueryOutcome {
    pub fn average_precision(&self) -> f64 {
        average_precision(&self.answer_positions)
    }

    pub fn reciprocal_rank(&self) -> f64 {
        reciprocal_rank(&self.answer_positions)
    }

    /// Valid answers missing from the candidate index.
    pub fn missing_answers(&self) -> usize {
        self.n_valid - self.n_answers_in_index
    }
}

pub fn relaxed_accuracy_hit(top_guess: usize, d_valid: &[usize]) -> bool {
    d_valid.contains(&top_guess)
}

/// `(1/n) * sum_k k / position_k` over the sorted answer positions; 0 when
/// no answer is in the ranking.
pub fn average_precision(positions: &[usize]) -> f64 {
    if positions.is_empty() {
        return 0.0;
    }
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    let total: f64 = sorted.iter().enumerate().map(|(k, &p)| (k + 1) as f64 / p as f64).sum();
    total / sorted.len() as f64
}

pub fn reciprocal_rank(positions: &[usize]) -> f64 {
    positions.iter().min().map_or(0.0, |&p| 1.0 / p as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationSummary {
    pub relation: String,
    pub n_queries: usize,
    pub rel_acc: f64,
    pub map: f64,
    pub mrr: f64,
    pub ambiguity: f64,
    /// Valid answers that were not in the candidate index, summed over queries.
    pub missing_answers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        MeanStd { mean, std: var.sqrt() }
    }
}

/// Macro statistics across relation summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallSummary {
    pub n_relations: usize,
    pub rel_acc: MeanStd,
    pub map: MeanStd,
    pub mrr: MeanStd,
    pub ambiguity: MeanStd,
}

/// Per-query averages over every query regardless of relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicroSummary {
    pub n_queries: usize,
    pub rel_acc: f64,
    pub map: f64,
    pub mrr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub relations: Vec<RelationSummary>,
    pub overall: OverallSummary,
    pub micro: MicroSummary,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (n, total) = values.fold((0usize, 0.0), |(n, t), v| (n + 1, t + v));
    total / n as f64
}

/// Aggregates outcomes grouped by relation. Relation order is preserved.
pub fn summarize(groups: &[(String, Vec<QueryOutcome>)]) -> Result<Summary> {
    if groups.is_empty() {
        return Err(Error::Config("no outcomes to summarize".into()));
    }
    let mut relations = Vec::with_capacity(groups.len());
    for (relation, outcomes) in groups {
        if outcomes.is_empty() {
            return Err(Error::EmptyRelation(relation.clone()));
        }
        relations.push(RelationSummary {
            relation: relation.clone(),
            n_queries: outcomes.len(),
            rel_acc: mean(outcomes.iter().map(|o| f64::from(u8::from(o.top_guess_correct)))),
            map: mean(outcomes.iter().map(QueryOutcome::average_precision)),
            mrr: mean(outcomes.iter().map(QueryOutcome::reciprocal_rank)),
            ambiguity: mean(outcomes.iter().map(|o| o.n_answers as f64)),
            missing_answers: outcomes.iter().map(QueryOutcome::missing_answers).sum(),
        });
    }

    let column =
        |f: fn(&RelationSummary) -> f64| -> MeanStd { MeanStd::of(&relations.iter().map(f).collect::<Vec<_>>()) };
    let overall = OverallSummary {
        n_relations: relations.len(),
        rel_acc: column(|r| r.rel_acc),
        map: column(|r| r.map),
        mrr: column(|r| r.mrr),
        ambiguity: column(|r| r.ambiguity),
    };

    let all = || groups.iter().flat_map(|(_, o)| o.iter());
    let micro = MicroSummary {
        n_queries: all().count(),
        rel_acc: mean(all().map(|o| f64::from(u8::from(o.top_guess_correct)))),
        map: mean(all().map(QueryOutcome::average_precision)),
        mrr: mean(all().map(QueryOutcome::reciprocal_rank)),
    };

    Ok(Summary {
        relations,
        overall,
        micro,
    })
}
