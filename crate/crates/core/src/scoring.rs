//! Ranking the candidate vocabulary for an analogy query.
//!
//! Three scoring functions are supported, for exemplar subject `a`, exemplar
//! objects `B = [b1, b2, ...]`, query subject `c` and candidate `d`:
//!
//! * `CosAdd`:   `cos(d, off + c)`
//! * `PairDist`: `cos(d - c, off)`
//! * `CosMul`:   `mean_i cos(d, b_i) * cos(d, c) / (cos(d, a) + eps)`
//!
//! where `off = (1/|B|) * sum_i (b_i - a)` is the exemplar offset. With a
//! single exemplar object every function reduces to its textbook form.
//! The cosine of anything with a zero vector is 0.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::CandidateIndex;

pub const DEFAULT_EPSILON: f64 = 0.001;

/// Number of candidate rows scored per block.
const BLOCK_ROWS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    CosAdd,
    PairDist,
    CosMul,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosadd" => Ok(Method::CosAdd),
            "pairdist" => Ok(Method::PairDist),
            "cosmul" => Ok(Method::CosMul),
            other => Err(Error::Config(format!(
                "unknown method {other:?} (expected cosadd, pairdist or cosmul)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::CosAdd => "cosadd",
            Method::PairDist => "pairdist",
            Method::CosMul => "cosmul",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringMethod {
    pub method: Method,
    /// Denominator offset for `CosMul`.
    pub epsilon: f64,
    /// Map cosines to `(x + 1) / 2` before the `CosMul` combination.
    pub shift_cosines: bool,
}

impl ScoringMethod {
    pub fn new(method: Method) -> Self {
        ScoringMethod {
            method,
            epsilon: DEFAULT_EPSILON,
            shift_cosines: false,
        }
    }

    pub fn cos_add() -> Self {
        Self::new(Method::CosAdd)
    }

    pub fn pair_dist() -> Self {
        Self::new(Method::PairDist)
    }

    pub fn cos_mul(epsilon: f64, shift_cosines: bool) -> Self {
        ScoringMethod {
            method: Method::CosMul,
            epsilon,
            shift_cosines,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!(
                "epsilon must be a positive finite number, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Query vectors for one analogy plus the candidate indices of the query
/// terms themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedQuery {
    pub a: Vec<f64>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<f64>,
    /// Sorted, deduplicated candidate indices of `a`, the used `b`s and `c`.
    pub exclusions: Vec<usize>,
}

impl ResolvedQuery {
    pub fn new(a: Vec<f64>, b: Vec<Vec<f64>>, c: Vec<f64>, mut exclusions: Vec<usize>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::Config("query needs at least one exemplar object".into()));
        }
        let dim = a.len();
        for v in b.iter().chain(std::iter::once(&c)) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        exclusions.sort_unstable();
        exclusions.dedup();
        Ok(ResolvedQuery { a, b, c, exclusions })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }
}

/// Mean exemplar offset `(1/|B|) * sum_i (b_i - a)`.
pub fn exemplar_offset(a: &[f64], b: &[Vec<f64>]) -> Vec<f64> {
    let mut off = vec![0.0; a.len()];
    for bi in b {
        for ((o, &x), &y) in off.iter_mut().zip(bi).zip(a) {
            *o += x - y;
        }
    }
    let n = b.len() as f64;
    off.iter_mut().for_each(|o| *o /= n);
    off
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let xs = x.chunks_exact(4);
    let ys = y.chunks_exact(4);
    let tail: f64 = xs.remainder().iter().zip(ys.remainder()).map(|(a, b)| a * b).sum();
    for (xc, yc) in xs.zip(ys) {
        acc[0] += xc[0] * yc[0];
        acc[1] += xc[1] * yc[1];
        acc[2] += xc[2] * yc[2];
        acc[3] += xc[3] * yc[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

#[inline]
fn cosine_from(dot: f64, norm_x: f64, norm_y: f64) -> f64 {
    if norm_x == 0.0 || norm_y == 0.0 {
        0.0
    } else {
        dot / (norm_x * norm_y)
    }
}

/// Scores every candidate in `index` for the query.
pub fn score_all(method: &ScoringMethod, q: &ResolvedQuery, index: &CandidateIndex) -> Result<Vec<f64>> {
    method.validate()?;
    if q.dim() != index.dim() {
        return Err(Error::DimensionMismatch {
            expected: index.dim(),
            found: q.dim(),
        });
    }
    let n = index.len();
    let dim = index.dim();
    let mut scores = vec![0.0; n];

    match method.method {
        Method::CosAdd => {
            let mut target = exemplar_offset(&q.a, &q.b);
            target.iter_mut().zip(&q.c).for_each(|(t, &c)| *t += c);
            let target_norm = norm(&target);
            for_each_block(index, &mut scores, |i, row, out| {
                *out = cosine_from(dot(row, &target), index.norm(i), target_norm);
            });
        }
        Method::PairDist => {
            let offset = exemplar_offset(&q.a, &q.b);
            let offset_norm = norm(&offset);
            let c = &q.c;
            for_each_block(index, &mut scores, |_, row, out| {
                let (mut num, mut sq) = (0.0, 0.0);
                for k in 0..dim {
                    let diff = row[k] - c[k];
                    num += diff * offset[k];
                    sq += diff * diff;
                }
                *out = cosine_from(num, sq.sqrt(), offset_norm);
            });
        }
        Method::CosMul => {
            let eps = method.epsilon;
            let shift = |x: f64| if method.shift_cosines { (x + 1.0) / 2.0 } else { x };
            let (a_norm, c_norm) = (norm(&q.a), norm(&q.c));
            let b_norms: Vec<f64> = q.b.iter().map(|b| norm(b)).collect();
            let nb = q.b.len() as f64;
            for_each_block(index, &mut scores, |i, row, out| {
                let dn = index.norm(i);
                let cos_a = shift(cosine_from(dot(row, &q.a), dn, a_norm));
                let cos_c = shift(cosine_from(dot(row, &q.c), dn, c_norm));
                let denom = cos_a + eps;
                let mut total = 0.0;
                for (b, &bn) in q.b.iter().zip(&b_norms) {
                    let cos_b = shift(cosine_from(dot(row, b), dn, bn));
                    total += cos_b * cos_c / denom;
                }
                *out = total / nb;
            });
        }
    }
    Ok(scores)
}

fn for_each_block<F>(index: &CandidateIndex, scores: &mut [f64], mut f: F)
where
    F: FnMut(usize, &[f64], &mut f64),
{
    let dim = index.dim();
    let vectors = index.vectors();
    for (block, out) in scores.chunks_mut(BLOCK_ROWS).enumerate() {
        let first = block * BLOCK_ROWS;
        let rows = &vectors[first * dim..(first + out.len()) * dim];
        for (k, (row, slot)) in rows.chunks_exact(dim).zip(out.iter_mut()).enumerate() {
            f(first + k, row, slot);
        }
    }
}

/// Candidates sorted by descending score, ties broken by ascending index.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    pub order: Vec<usize>,
    pub scores: Vec<f64>,
}

impl RankedResult {
    pub fn top(&self) -> usize {
        self.order[0]
    }

    /// 1-based rank of `candidate`, if it takes part in the ranking.
    pub fn position_of(&self, candidate: usize) -> Option<usize> {
        self.order.iter().position(|&i| i == candidate).map(|p| p + 1)
    }

    /// Sorted 1-based ranks of every target that takes part in the ranking.
    pub fn positions_of(&self, targets: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .order
            .iter()
            .enumerate()
            .filter(|(_, i)| targets.contains(i))
            .map(|(p, _)| p + 1)
            .collect();
        out.sort_unstable();
        out
    }
}

// NaN sorts last and -0.0 ties with 0.0.
#[inline]
fn rank_key(s: f64) -> f64 {
    if s.is_nan() {
        f64::NEG_INFINITY
    } else if s == 0.0 {
        0.0
    } else {
        s
    }
}

#[inline]
fn ranks_before(scores: &[f64], i: usize, j: usize) -> bool {
    let (si, sj) = (rank_key(scores[i]), rank_key(scores[j]));
    si > sj || (si == sj && i < j)
}

fn compare(scores: &[f64], i: usize, j: usize) -> Ordering {
    rank_key(scores[j])
        .partial_cmp(&rank_key(scores[i]))
        .unwrap_or(Ordering::Equal)
        .then(i.cmp(&j))
}

/// Ranks all candidates, leaving out `exclusions` when given.
pub fn rank(scores: &[f64], exclusions: Option<&[usize]>) -> Result<RankedResult> {
    let excluded = exclusion_mask(scores.len(), exclusions);
    let mut order: Vec<usize> = (0..scores.len()).filter(|&i| !excluded[i]).collect();
    if order.is_empty() {
        return Err(Error::AllExcluded);
    }
    order.sort_unstable_by(|&i, &j| compare(scores, i, j));
    Ok(RankedResult {
        order,
        scores: scores.to_vec(),
    })
}

fn exclusion_mask(n: usize, exclusions: Option<&[usize]>) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &i in exclusions.unwrap_or_default() {
        if i < n {
            mask[i] = true;
        }
    }
    mask
}

/// Top-ranked candidate outside `exclusions`, same order as [`rank`] without
/// the full sort.
pub fn top_candidate(scores: &[f64], exclusions: &[usize]) -> Result<usize> {
    let excluded = exclusion_mask(scores.len(), Some(exclusions));
    let mut best: Option<usize> = None;
    for i in (0..scores.len()).filter(|&i| !excluded[i]) {
        match best {
            Some(b) if !ranks_before(scores, i, b) => {}
            _ => best = Some(i),
        }
    }
    best.ok_or(Error::AllExcluded)
}

/// Sorted 1-based positions of `targets` in the full (unexcluded) ranking,
/// computed by counting the candidates that rank ahead of each target.
pub fn target_positions(scores: &[f64], targets: &[usize]) -> Vec<usize> {
    let mut targets: Vec<usize> = targets.iter().copied().filter(|&t| t < scores.len()).collect();
    targets.sort_unstable();
    targets.dedup();
    let mut out: Vec<usize> = targets
        .iter()
        .map(|&t| 1 + (0..scores.len()).filter(|&j| ranks_before(scores, j, t)).count())
        .collect();
    out.sort_unstable();
    out
}
