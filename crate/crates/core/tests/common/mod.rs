#![allow(dead_code)]

use analogy_core::scoring::{Method, ResolvedQuery, ScoringMethod};
use analogy_core::{build_candidate_index, CandidateIndex, EmbeddingMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random embeddings with `n` tokens named `w0..w{n-1}`.
pub fn random_embeddings(rng: &mut impl Rng, n: usize, dim: usize) -> EmbeddingMatrix {
    let tokens = (0..n).map(|i| format!("w{i}")).collect();
    let values = (0..n * dim).map(|_| rng.gen_range(-1.0f32..1.0)).collect();
    EmbeddingMatrix::new(tokens, dim, values).unwrap()
}

/// Candidate terms: every token, plus `n_phrases` random two-word phrases.
pub fn random_index(rng: &mut impl Rng, emb: &EmbeddingMatrix, n_phrases: usize) -> CandidateIndex {
    let mut terms: Vec<String> = emb.tokens().to_vec();
    for _ in 0..n_phrases {
        let i = rng.gen_range(0..emb.len());
        let j = rng.gen_range(0..emb.len());
        terms.push(format!("w{i} w{j}"));
    }
    build_candidate_index(&terms, emb).unwrap()
}

pub fn random_vec(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn random_query(rng: &mut impl Rng, dim: usize, n_b: usize) -> ResolvedQuery {
    let a = random_vec(rng, dim);
    let b = (0..n_b).map(|_| random_vec(rng, dim)).collect();
    let c = random_vec(rng, dim);
    ResolvedQuery::new(a, b, c, vec![]).unwrap()
}

pub fn all_methods() -> Vec<ScoringMethod> {
    vec![
        ScoringMethod::cos_add(),
        ScoringMethod::pair_dist(),
        ScoringMethod::cos_mul(0.001, false),
        ScoringMethod::cos_mul(0.001, true),
    ]
}

// Reference implementation: one candidate at a time, every intermediate
// vector materialized, plain loops.

pub fn naive_cos(x: &[f64], y: &[f64]) -> f64 {
    let mut xy = 0.0;
    let mut xx = 0.0;
    let mut yy = 0.0;
    for k in 0..x.len() {
        xy += x[k] * y[k];
        xx += x[k] * x[k];
        yy += y[k] * y[k];
    }
    if xx == 0.0 || yy == 0.0 {
        0.0
    } else {
        xy / (xx.sqrt() * yy.sqrt())
    }
}

pub fn naive_offset(a: &[f64], b: &[Vec<f64>]) -> Vec<f64> {
    let mut sum = vec![0.0; a.len()];
    for bi in b {
        for k in 0..a.len() {
            sum[k] += bi[k] - a[k];
        }
    }
    sum.iter().map(|s| s / b.len() as f64).collect()
}

pub fn naive_score(method: &ScoringMethod, q: &ResolvedQuery, d: &[f64]) -> f64 {
    let off = naive_offset(&q.a, &q.b);
    match method.method {
        Method::CosAdd => {
            let target: Vec<f64> = off.iter().zip(&q.c).map(|(o, c)| o + c).collect();
            naive_cos(d, &target)
        }
        Method::PairDist => {
            let diff: Vec<f64> = d.iter().zip(&q.c).map(|(x, c)| x - c).collect();
            naive_cos(&diff, &off)
        }
        Method::CosMul => {
            let f = |x: f64| if method.shift_cosines { (x + 1.0) / 2.0 } else { x };
            let mut total = 0.0;
            for b in &q.b {
                total += f(naive_cos(d, b)) * f(naive_cos(d, &q.c)) / (f(naive_cos(d, &q.a)) + method.epsilon);
            }
            total / q.b.len() as f64
        }
    }
}

pub fn naive_scores(method: &ScoringMethod, q: &ResolvedQuery, index: &CandidateIndex) -> Vec<f64> {
    (0..index.len())
        .map(|i| naive_score(method, q, index.vector(i)))
        .collect()
}

/// Sorts candidate indices by (-score, index) with a plain comparison sort.
pub fn naive_rank(scores: &[f64], exclusions: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).filter(|i| !exclusions.contains(i)).collect();
    idx.sort_by(|&i, &j| {
        let key = |s: f64| if s.is_nan() { f64::NEG_INFINITY } else { s };
        key(scores[j]).partial_cmp(&key(scores[i])).unwrap().then(i.cmp(&j))
    });
    idx
}
