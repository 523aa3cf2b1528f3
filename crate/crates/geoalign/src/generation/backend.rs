//! The diffusion backend boundary.
//!
//! The rest of the pipeline treats image synthesis as an opaque service
//! with three capabilities: encoding a prompt into conditioning, running a
//! conditioned generation, and running the prompt-to-prompt procedure with
//! cross-attention interception. [`super::StubBackend`] implements all
//! three deterministically without model weights; a model-backed
//! implementation slots in behind the same trait with weights loaded from
//! a configured path.

use image::RgbImage;

use super::{CrossAttentionParams, GenerationError, GenerationParams};
use crate::embedding::TokenSequenceEmbedding;

pub trait DiffusionBackend: Send + Sync {
    /// Stable identifier included in records ("backend build").
    fn id(&self) -> &str;

    /// Width/height divisibility requirement (8 for latent diffusion).
    fn latent_factor(&self) -> u32 {
        8
    }

    /// (context length, embedding dimension) of the conditioning input.
    fn conditioning_shape(&self) -> (usize, usize);

    /// Encodes a prompt into the conditioning sequence the sampler
    /// consumes.
    fn encode_prompt(&self, prompt: &str) -> Result<TokenSequenceEmbedding, GenerationError>;

    /// Runs the sampler on a pre-built conditioning sequence. Deterministic
    /// per (backend build, conditioning, params).
    fn generate(
        &self,
        cond: &TokenSequenceEmbedding,
        params: &GenerationParams,
    ) -> Result<RgbImage, GenerationError>;

    /// Prompt-to-prompt: runs the initial conditioning's trajectory,
    /// records its cross-attention maps, and re-runs with the editorial
    /// conditioning, injecting the recorded maps during the configured
    /// schedule window and applying per-token weights.
    fn generate_prompt_to_prompt(
        &self,
        initial: &TokenSequenceEmbedding,
        editorial: &TokenSequenceEmbedding,
        ca: &CrossAttentionParams,
        params: &GenerationParams,
    ) -> Result<RgbImage, GenerationError>;

    /// Token counting with the backend's tokenizer, for budget checks.
    fn count_tokens(&self, prompt: &str) -> usize {
        prompt.split_whitespace().count()
    }
}

impl crate::prompt::TokenCounter for &dyn DiffusionBackend {
    fn count_tokens(&self, text: &str) -> usize {
        DiffusionBackend::count_tokens(*self, text)
    }
}
