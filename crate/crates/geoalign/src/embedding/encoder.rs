//! The embedding service behind the pipeline.
//!
//! Everything downstream (masks, seed search, the study reports, the stub
//! diffusion backend) talks to [`TextImageEncoder`]. [`HashEncoder`] is the
//! weight-free implementation: it derives unit vectors from hashes of the
//! input, which preserves every contract the pipeline relies on —
//! determinism, fixed dimension, identical inputs mapping to identical
//! vectors — without model files. A CLIP-backed implementation plugs in
//! behind the same trait when weights are configured.

use image::RgbImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use super::{Embedding, EmbeddingError, Modality, TokenSequenceEmbedding};

/// Text and image embedding with pooled and per-token forms.
///
/// Implementations must be deterministic for fixed model weights and safe
/// to call from multiple threads (serialize device access internally).
pub trait TextImageEncoder: Send + Sync {
    fn model_id(&self) -> &str;
    /// Projection dimension D, fixed per model.
    fn dim(&self) -> usize;
    /// Token context length L, fixed per model.
    fn context_length(&self) -> usize;
    fn embed_text(&self, text: &str)
        -> Result<(Embedding, TokenSequenceEmbedding), EmbeddingError>;
    fn embed_image(&self, image: &RgbImage) -> Result<Embedding, EmbeddingError>;
    /// Budget token counting with this encoder's tokenizer; the default
    /// counts whitespace tokens.
    fn count_tokens(&self, text: &str) -> usize {
        text.split_whitespace().count()
    }
}

impl crate::prompt::TokenCounter for &dyn TextImageEncoder {
    fn count_tokens(&self, text: &str) -> usize {
        TextImageEncoder::count_tokens(*self, text)
    }
}

pub const DEFAULT_TEXT_MODEL: &str = "clip-vit-large-patch14";

/// Deterministic hash-based encoder.
#[derive(Debug, Clone)]
pub struct HashEncoder {
    model_id: String,
    dim: usize,
    context_length: usize,
}

impl Default for HashEncoder {
    fn default() -> Self {
        HashEncoder::new(format!("hash:{DEFAULT_TEXT_MODEL}"), 768, 77)
    }
}

impl HashEncoder {
    pub fn new(model_id: impl Into<String>, dim: usize, context_length: usize) -> Self {
        HashEncoder {
            model_id: model_id.into(),
            dim,
            context_length,
        }
    }

    fn token_vector(&self, tag: &str, token: &str) -> Vec<f32> {
        let mut hasher = Sha256::new();
        hasher.update(self.model_id.as_bytes());
        hasher.update([0u8]);
        hasher.update(tag.as_bytes());
        hasher.update([0u8]);
        hasher.update(token.as_bytes());
        let seed: [u8; 32] = hasher.finalize().into();
        let mut rng = ChaCha20Rng::from_seed(seed);
        let mut v: Vec<f32> = (0..self.dim).map(|_| rng.random::<f32>() * 2.0 - 1.0).collect();
        normalize(&mut v);
        v
    }

    /// Split mirroring a subword tokenizer loosely: lowercase alphanumeric
    /// runs, so non-Latin scripts embed like any other text.
    fn tokens(text: &str) -> Vec<String> {
        text.to_lowercase()
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    }
}

fn normalize(v: &mut [f32]) {
    let norm = v.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x = (*x as f64 / norm) as f32;
        }
    }
}

impl TextImageEncoder for HashEncoder {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn context_length(&self) -> usize {
        self.context_length
    }

    fn embed_text(
        &self,
        text: &str,
    ) -> Result<(Embedding, TokenSequenceEmbedding), EmbeddingError> {
        let mut tokens = Self::tokens(text);
        let budget = self.context_length - 2; // start/end markers
        if tokens.len() > budget {
            log::warn!(
                "text of {} tokens truncated to context length {}",
                tokens.len(),
                self.context_length
            );
            tokens.truncate(budget);
        }

        let mut rows = nalgebra::DMatrix::zeros(self.context_length, self.dim);
        let mut attention_mask = vec![false; self.context_length];
        let mut write_row = |i: usize, v: &[f32], mask: &mut Vec<bool>| {
            for (j, x) in v.iter().enumerate() {
                rows[(i, j)] = *x;
            }
            mask[i] = true;
        };
        write_row(0, &self.token_vector("marker", "<start>"), &mut attention_mask);
        for (i, token) in tokens.iter().enumerate() {
            write_row(i + 1, &self.token_vector("token", token), &mut attention_mask);
        }
        write_row(
            tokens.len() + 1,
            &self.token_vector("marker", "<end>"),
            &mut attention_mask,
        );

        let active = tokens.len() + 2;
        let mut pooled = vec![0.0f32; self.dim];
        for j in 0..self.dim {
            let mut acc = 0.0f64;
            for i in 0..active {
                acc += rows[(i, j)] as f64;
            }
            pooled[j] = (acc / active as f64) as f32;
        }
        normalize(&mut pooled);

        Ok((
            Embedding::new(pooled, Modality::Text, &self.model_id),
            TokenSequenceEmbedding {
                rows,
                attention_mask,
                model_id: self.model_id.clone(),
            },
        ))
    }

    fn embed_image(&self, image: &RgbImage) -> Result<Embedding, EmbeddingError> {
        if image.width() == 0 || image.height() == 0 {
            return Err(EmbeddingError::BadImage("empty image".into()));
        }
        let resized = image::imageops::resize(image, 224, 224, image::imageops::FilterType::Triangle);
        let mut hasher = Sha256::new();
        hasher.update(self.model_id.as_bytes());
        hasher.update([1u8]);
        hasher.update(resized.as_raw());
        let seed: [u8; 32] = hasher.finalize().into();
        let mut rng = ChaCha20Rng::from_seed(seed);
        let mut v: Vec<f32> = (0..self.dim).map(|_| rng.random::<f32>() * 2.0 - 1.0).collect();
        normalize(&mut v);
        Ok(Embedding::new(v, Modality::Image, &self.model_id))
    }
}
