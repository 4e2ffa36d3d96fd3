//! Term normalization and multi-word-expression composition.

use serde::{Deserialize, Serialize};
use unicode_general_category::{get_general_category, GeneralCategory};

use crate::embedding::EmbeddingMatrix;

/// Lowercases `term`, removes punctuation and symbol characters (Unicode
/// categories P* and S*) and splits the remainder on whitespace.
pub fn normalize_term(term: &str) -> Vec<String> {
    let cleaned: String = term
        .chars()
        .filter(|&c| !is_punct_or_symbol(c))
        .flat_map(char::to_lowercase)
        .collect();
    cleaned.split_whitespace().map(str::to_owned).collect()
}

/// The lookup key of a term: its normalized tokens joined by single spaces.
pub fn term_key(term: &str) -> String {
    normalize_term(term).join(" ")
}

fn is_punct_or_symbol(c: char) -> bool {
    use GeneralCategory::*;
    matches!(
        get_general_category(c),
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
            | MathSymbol
            | CurrencySymbol
            | ModifierSymbol
            | OtherSymbol
    )
}

/// A term together with the average of its in-vocabulary component vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedTerm {
    pub surface: String,
    pub tokens: Vec<String>,
    pub in_vocab: Vec<String>,
    /// Absent exactly when no component token is in the vocabulary.
    pub vector: Option<Vec<f64>>,
}

impl ComposedTerm {
    pub fn is_composable(&self) -> bool {
        self.vector.is_some()
    }
}

/// Composes a (possibly multi-word) term as the mean of the raw vectors of
/// its in-vocabulary tokens. Out-of-vocabulary tokens are ignored.
pub fn compose_term(term: &str, emb: &EmbeddingMatrix) -> ComposedTerm {
    let tokens = normalize_term(term);
    let rows: Vec<&[f32]> = tokens.iter().filter_map(|t| emb.get(t)).collect();
    let in_vocab = tokens.iter().filter(|t| emb.index_of(t).is_some()).cloned().collect();

    let vector = (!rows.is_empty()).then(|| {
        let mut sum = vec![0.0f64; emb.dim()];
        for row in &rows {
            for (acc, &x) in sum.iter_mut().zip(row.iter()) {
                *acc += f64::from(x);
            }
        }
        let k = rows.len() as f64;
        sum.iter_mut().for_each(|x| *x /= k);
        sum
    });

    ComposedTerm {
        surface: term.to_owned(),
        tokens,
        in_vocab,
        vector,
    }
}
