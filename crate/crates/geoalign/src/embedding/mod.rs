//! Text/image embeddings, cosine similarity, and culture masks.

mod encoder;
mod mask;
mod study;

pub use encoder::{HashEncoder, TextImageEncoder};
pub use mask::{apply_mask, apply_mask_with_mode, build_culture_mask, CultureMask, MaskMode};
pub use study::{run_language_study, LanguageStudy};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modality {
    Text,
    Image,
}

/// A pooled embedding vector in the shared text/image space.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub vector: Vec<f32>,
    pub modality: Modality,
    pub model_id: String,
}

impl Embedding {
    pub fn new(vector: Vec<f32>, modality: Modality, model_id: impl Into<String>) -> Self {
        Embedding {
            vector,
            modality,
            model_id: model_id.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn norm(&self) -> f64 {
        self.vector.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt()
    }
}

/// Per-token embeddings over the encoder's fixed context length, as
/// consumed by the generator's conditioning input.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenSequenceEmbedding {
    /// L x D, rows beyond the attention mask are padding.
    pub rows: DMatrix<f32>,
    pub attention_mask: Vec<bool>,
    pub model_id: String,
}

impl TokenSequenceEmbedding {
    pub fn context_length(&self) -> usize {
        self.rows.nrows()
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    /// Number of non-padding positions.
    pub fn active_len(&self) -> usize {
        self.attention_mask.iter().filter(|m| **m).count()
    }
}

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("embedding model {0} unavailable")]
    ModelUnavailable(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cosine similarity undefined for a zero vector")]
    ZeroVector,
    #[error("cannot decode image: {0}")]
    BadImage(String),
    #[error("mask text must be non-empty")]
    EmptyMaskText,
    #[error("language study needs at least two languages")]
    TooFewLanguages,
    #[error("word lists must align by line: {0} has {1} words, expected {2}")]
    MisalignedWordList(String, usize, usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Cosine similarity of two embeddings, in `[-1, 1]`.
///
/// Accumulates in f64; identical vectors score exactly 1.
pub fn cosine_similarity(a: &Embedding, b: &Embedding) -> Result<f64, EmbeddingError> {
    if a.dim() != b.dim() {
        return Err(EmbeddingError::DimensionMismatch(a.dim(), b.dim()));
    }
    cosine_of_slices(&a.vector, &b.vector)
}

pub(crate) fn cosine_of_slices(a: &[f32], b: &[f32]) -> Result<f64, EmbeddingError> {
    let mut dot = 0.0f64;
    let mut na = 0.0f64;
    let mut nb = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        let (x, y) = (*x as f64, *y as f64);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(EmbeddingError::ZeroVector);
    }
    Ok((dot / (na * nb).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(v: &[f32]) -> Embedding {
        Embedding::new(v.to_vec(), Modality::Text, "test")
    }

    #[test]
    fn identical_vectors_score_exactly_one() {
        let v = emb(&[0.3, -1.2, 0.07, 2.5]);
        assert_eq!(cosine_similarity(&v, &v).unwrap(), 1.0);
    }

    #[test]
    fn orthogonal_vectors_score_zero() {
        assert_eq!(
            cosine_similarity(&emb(&[1.0, 0.0]), &emb(&[0.0, 1.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn known_value() {
        let got = cosine_similarity(&emb(&[1.0, 2.0, 3.0]), &emb(&[4.0, 5.0, 6.0])).unwrap();
        assert!((got - 0.9746318461970762).abs() < 1e-12);
    }

    #[test]
    fn zero_vector_is_an_error() {
        assert!(matches!(
            cosine_similarity(&emb(&[0.0, 0.0]), &emb(&[1.0, 1.0])),
            Err(EmbeddingError::ZeroVector)
        ));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            cosine_similarity(&emb(&[1.0]), &emb(&[1.0, 2.0])),
            Err(EmbeddingError::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn symmetry_and_scale_invariance() {
        let a = emb(&[0.5, -0.25, 1.5]);
        let b = emb(&[2.0, 0.1, -0.7]);
        assert_eq!(
            cosine_similarity(&a, &b).unwrap(),
            cosine_similarity(&b, &a).unwrap()
        );
        let scaled = emb(&[0.5 * 3.0, -0.25 * 3.0, 1.5 * 3.0]);
        assert!((cosine_similarity(&a, &scaled).unwrap() - 1.0).abs() < 1e-9);
    }
}
