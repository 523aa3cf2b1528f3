//! Culture masks: embedding offsets that steer generation toward a culture.
//!
//! A mask is built by embedding a short culture phrase (often in native
//! script). Applying it adds the multiplier-scaled mean of the mask's token
//! rows to every non-padding position of the prompt conditioning, keeping
//! the L x D shape the generator expects; multiplier 0 is an exact
//! identity and the offset is linear in the multiplier. Two alternative
//! arithmetic modes are available for experimentation.

use serde::{Deserialize, Serialize};

use super::{Embedding, EmbeddingError, TextImageEncoder, TokenSequenceEmbedding};
use crate::prompt::CultureProfile;

/// How the mask offsets the prompt conditioning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskMode {
    /// Add the mean of the mask's non-padding rows to every non-padding
    /// prompt position (the default).
    #[default]
    MeanOffset,
    /// Add the mask's pooled vector to every non-padding prompt position.
    PooledOffset,
    /// Add mask row i to prompt row i where both are non-padding.
    PerPosition,
}

/// A culture phrase embedded in pooled and per-token form, with the
/// strength multiplier used when applying it.
#[derive(Debug, Clone)]
pub struct CultureMask {
    pub source_text: String,
    pub pooled: Embedding,
    pub sequence: TokenSequenceEmbedding,
    pub multiplier: f64,
}

impl CultureMask {
    /// Mean of the non-padding sequence rows.
    pub fn mean_row(&self) -> Vec<f32> {
        let dim = self.sequence.dim();
        let mut acc = vec![0.0f64; dim];
        let mut count = 0usize;
        for (i, active) in self.sequence.attention_mask.iter().enumerate() {
            if !active {
                continue;
            }
            count += 1;
            for j in 0..dim {
                acc[j] += self.sequence.rows[(i, j)] as f64;
            }
        }
        if count == 0 {
            return vec![0.0; dim];
        }
        acc.into_iter().map(|x| (x / count as f64) as f32).collect()
    }
}

/// Embeds a profile's mask text into a [`CultureMask`].
pub fn build_culture_mask(
    encoder: &dyn TextImageEncoder,
    profile: &CultureProfile,
) -> Result<CultureMask, EmbeddingError> {
    if profile.mask_text.trim().is_empty() {
        return Err(EmbeddingError::EmptyMaskText);
    }
    let (pooled, sequence) = encoder.embed_text(&profile.mask_text)?;
    Ok(CultureMask {
        source_text: profile.mask_text.clone(),
        pooled,
        sequence,
        multiplier: profile.mask_multiplier,
    })
}

/// Applies a mask with the default mean-offset arithmetic.
pub fn apply_mask(
    prompt_seq: &TokenSequenceEmbedding,
    mask: &CultureMask,
) -> Result<TokenSequenceEmbedding, EmbeddingError> {
    apply_mask_with_mode(prompt_seq, mask, MaskMode::MeanOffset)
}

/// Applies a mask with the chosen arithmetic. Padding rows and the
/// attention mask are never altered; output shape equals input shape.
pub fn apply_mask_with_mode(
    prompt_seq: &TokenSequenceEmbedding,
    mask: &CultureMask,
    mode: MaskMode,
) -> Result<TokenSequenceEmbedding, EmbeddingError> {
    if prompt_seq.dim() != mask.sequence.dim() {
        return Err(EmbeddingError::DimensionMismatch(
            prompt_seq.dim(),
            mask.sequence.dim(),
        ));
    }
    if mode == MaskMode::PerPosition && prompt_seq.context_length() != mask.sequence.context_length()
    {
        return Err(EmbeddingError::DimensionMismatch(
            prompt_seq.context_length(),
            mask.sequence.context_length(),
        ));
    }

    let multiplier = mask.multiplier as f32;
    let dim = prompt_seq.dim();
    let mut rows = prompt_seq.rows.clone();
    match mode {
        MaskMode::MeanOffset | MaskMode::PooledOffset => {
            let offset = match mode {
                MaskMode::MeanOffset => mask.mean_row(),
                _ => mask.pooled.vector.clone(),
            };
            for (i, active) in prompt_seq.attention_mask.iter().enumerate() {
                if !active {
                    continue;
                }
                for j in 0..dim {
                    rows[(i, j)] += multiplier * offset[j];
                }
            }
        }
        MaskMode::PerPosition => {
            for (i, active) in prompt_seq.attention_mask.iter().enumerate() {
                if !active || !mask.sequence.attention_mask[i] {
                    continue;
                }
                for j in 0..dim {
                    rows[(i, j)] += multiplier * mask.sequence.rows[(i, j)];
                }
            }
        }
    }

    Ok(TokenSequenceEmbedding {
        rows,
        attention_mask: prompt_seq.attention_mask.clone(),
        model_id: prompt_seq.model_id.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::HashEncoder;

    fn profile(mask_text: &str, multiplier: f64) -> CultureProfile {
        CultureProfile {
            name: "test".into(),
            prompt_keyword: String::new(),
            editorial_keyword: "Test".into(),
            mask_text: mask_text.into(),
            mask_multiplier: multiplier,
        }
    }

    #[test]
    fn builds_masks_for_non_latin_phrases() {
        let enc = HashEncoder::default();
        for (text, multiplier) in [
            ("\u{65e5}\u{672c}\u{753b}", 0.2),
            ("\u{0643}\u{0627}\u{0631}\u{062a}\u{0648}\u{0646} \u{0639}\u{0631}\u{0628}\u{064a}", 0.3),
        ] {
            let mask = build_culture_mask(&enc, &profile(text, multiplier)).unwrap();
            assert_eq!(mask.multiplier, multiplier);
            assert!(mask.pooled.vector.iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn empty_mask_text_is_rejected() {
        let enc = HashEncoder::default();
        assert!(matches!(
            build_culture_mask(&enc, &profile("  ", 1.0)),
            Err(EmbeddingError::EmptyMaskText)
        ));
    }

    #[test]
    fn zero_multiplier_is_the_exact_identity() {
        let enc = HashEncoder::default();
        let (_, seq) = enc.embed_text("A photo of an old man sitting").unwrap();
        let mask = build_culture_mask(&enc, &profile("mask text", 0.0)).unwrap();
        let out = apply_mask(&seq, &mask).unwrap();
        assert_eq!(out.rows, seq.rows);
        assert_eq!(out.attention_mask, seq.attention_mask);
    }

    #[test]
    fn multipliers_add() {
        let enc = HashEncoder::default();
        let (_, seq) = enc.embed_text("A photo of an old man sitting").unwrap();
        let m1 = build_culture_mask(&enc, &profile("mask text", 0.7)).unwrap();
        let mut m2 = m1.clone();
        m2.multiplier = 1.3;
        let mut sum = m1.clone();
        sum.multiplier = 2.0;

        let sequential = apply_mask(&apply_mask(&seq, &m1).unwrap(), &m2).unwrap();
        let combined = apply_mask(&seq, &sum).unwrap();
        for (a, b) in sequential.rows.iter().zip(combined.rows.iter()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn padding_rows_are_untouched() {
        let enc = HashEncoder::default();
        let (_, seq) = enc.embed_text("short prompt").unwrap();
        let mask = build_culture_mask(&enc, &profile("mask", 3.0)).unwrap();
        let out = apply_mask(&seq, &mask).unwrap();
        for (i, active) in seq.attention_mask.iter().enumerate() {
            if !active {
                for j in 0..seq.dim() {
                    assert_eq!(out.rows[(i, j)], seq.rows[(i, j)]);
                }
            }
        }
        assert_eq!(out.attention_mask, seq.attention_mask);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let enc = HashEncoder::default();
        let small = HashEncoder::new("small", 32, 77);
        let (_, seq) = enc.embed_text("prompt").unwrap();
        let mask = build_culture_mask(&small, &profile("mask", 1.0)).unwrap();
        assert!(matches!(
            apply_mask(&seq, &mask),
            Err(EmbeddingError::DimensionMismatch(768, 32))
        ));
    }

    #[test]
    fn masked_conditioning_differs_from_unmasked() {
        let enc = HashEncoder::default();
        let (_, seq) = enc.embed_text("A photo of an old man sitting").unwrap();
        let mask = build_culture_mask(
            &enc,
            &profile("\u{092d}\u{093e}\u{0930}\u{0924}\u{0940}\u{092f} \u{0915}\u{093e}\u{0930}\u{094d}\u{091f}\u{0942}\u{0928} style", 3.0),
        )
        .unwrap();
        let out = apply_mask(&seq, &mask).unwrap();
        assert_ne!(out.rows, seq.rows);
    }
}
