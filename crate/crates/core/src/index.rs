//! The candidate answer vocabulary: composed, unit-normalized term vectors.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::terms::{compose_term, term_key};

#[derive(Debug, Clone)]
pub struct CandidateIndex {
    surfaces: Vec<String>,
    keys: Vec<String>,
    dim: usize,
    vectors: Vec<f64>,
    norms: Vec<f64>,
    by_key: HashMap<String, usize>,
    discarded: usize,
    duplicates: usize,
}

impl CandidateIndex {
    pub fn len(&self) -> usize {
        self.surfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surfaces.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn surface(&self, i: usize) -> &str {
        &self.surfaces[i]
    }

    pub fn surfaces(&self) -> &[String] {
        &self.surfaces
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn norm(&self, i: usize) -> f64 {
        self.norms[i]
    }

    /// Row-major buffer of all entry vectors.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    /// Terms dropped because none of their tokens are in the vocabulary.
    pub fn discarded(&self) -> usize {
        self.discarded
    }

    /// Input terms that normalized to an already seen term.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    /// Finds the entry for `term` after normalization.
    pub fn lookup(&self, term: &str) -> Option<usize> {
        self.by_key.get(&term_key(term)).copied()
    }
}

/// Composes every term, drops those with no in-vocabulary token, and
/// unit-normalizes the rest. Terms that normalize to the same key collapse
/// to their first occurrence; input order is otherwise preserved.
pub fn build_candidate_index<S: AsRef<str>>(terms: &[S], emb: &EmbeddingMatrix) -> Result<CandidateIndex> {
    let dim = emb.dim();
    let mut index = CandidateIndex {
        surfaces: Vec::new(),
        keys: Vec::new(),
        dim,
        vectors: Vec::new(),
        norms: Vec::new(),
        by_key: HashMap::new(),
        discarded: 0,
        duplicates: 0,
    };
    let mut seen = std::collections::HashSet::new();

    for term in terms {
        let term = term.as_ref();
        let key = term_key(term);
        if !seen.insert(key.clone()) {
            index.duplicates += 1;
            continue;
        }
        let Some(mut v) = compose_term(term, emb).vector else {
            index.discarded += 1;
            continue;
        };
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            // Components cancelled out exactly; there is no direction to rank.
            index.discarded += 1;
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();

        index.by_key.insert(key.clone(), index.surfaces.len());
        index.surfaces.push(term.to_owned());
        index.keys.push(key);
        index.vectors.extend_from_slice(&v);
        index.norms.push(norm);
    }

    if index.is_empty() {
        return Err(Error::EmptyIndex {
            discarded: index.discarded,
        });
    }
    log::info!(
        "candidate index: {} entries, {} discarded as out of vocabulary, {} duplicates",
        index.len(),
        index.discarded,
        index.duplicates
    );
    Ok(index)
}

/// Reads a candidate term list: one UTF-8 term per line, blank lines skipped.
pub fn read_term_list(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect())
}
