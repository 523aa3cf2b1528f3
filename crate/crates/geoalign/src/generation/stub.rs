//! Deterministic stub backend.
//!
//! Produces procedural images by running a miniature latent "denoising"
//! loop over the real conditioning tensors: a seeded latent is updated for
//! `steps` iterations under per-token attention maps derived from the
//! conditioning, with classifier-free guidance mixing and prompt-to-prompt
//! attention injection wired exactly like the model-backed path. The
//! arithmetic is meaningless as art but preserves every contract the
//! pipeline and its tests rely on: bitwise determinism, sensitivity to
//! every input, pathway equivalence, and identity edits.

use std::sync::{Arc, Mutex, OnceLock};

use image::RgbImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::backend::DiffusionBackend;
use super::{CrossAttentionParams, GenerationError, GenerationParams};
use crate::embedding::{TextImageEncoder, TokenSequenceEmbedding};

const LATENT_CHANNELS: usize = 4;

pub struct StubBackend {
    encoder: Arc<dyn TextImageEncoder>,
    id: String,
    /// One in-flight generation per device context.
    device: Mutex<()>,
    uncond: OnceLock<TokenSequenceEmbedding>,
}

impl StubBackend {
    pub fn new(encoder: Arc<dyn TextImageEncoder>) -> Self {
        let id = format!("stub:{}", encoder.model_id());
        StubBackend {
            encoder,
            id,
            device: Mutex::new(()),
            uncond: OnceLock::new(),
        }
    }

    /// Stub over the default hash encoder.
    pub fn with_default_encoder() -> Self {
        StubBackend::new(Arc::new(crate::embedding::HashEncoder::default()))
    }

    pub fn encoder(&self) -> &dyn TextImageEncoder {
        self.encoder.as_ref()
    }

    fn unconditional(&self) -> Result<&TokenSequenceEmbedding, GenerationError> {
        if let Some(u) = self.uncond.get() {
            return Ok(u);
        }
        let (_, seq) = self.encoder.embed_text("")?;
        Ok(self.uncond.get_or_init(|| seq))
    }

    fn check_shape(&self, cond: &TokenSequenceEmbedding) -> Result<(), GenerationError> {
        let expected = self.conditioning_shape();
        let got = (cond.context_length(), cond.dim());
        if got != expected {
            return Err(GenerationError::ShapeMismatch { expected, got });
        }
        Ok(())
    }
}

/// Per-step attention maps for the active tokens: `maps[token][position]`.
type AttentionMaps = Vec<Vec<f32>>;

enum AttentionMode<'a> {
    Plain,
    Record(&'a mut Vec<AttentionMaps>),
    Inject {
        recorded: &'a [AttentionMaps],
        ca: &'a CrossAttentionParams,
    },
}

struct ActiveToken {
    row: Vec<f32>,
    mean: f32,
}

fn active_tokens(cond: &TokenSequenceEmbedding) -> Vec<ActiveToken> {
    let dim = cond.dim();
    cond.attention_mask
        .iter()
        .enumerate()
        .filter(|(_, active)| **active)
        .map(|(i, _)| {
            let row: Vec<f32> = (0..dim).map(|j| cond.rows[(i, j)]).collect();
            let mean = (row.iter().map(|x| *x as f64).sum::<f64>() / dim as f64) as f32;
            ActiveToken { row, mean }
        })
        .collect()
}

fn attention_for(tokens: &[ActiveToken], latent: &[f32], positions: usize) -> AttentionMaps {
    let dim = tokens.first().map(|t| t.row.len()).unwrap_or(1);
    tokens
        .iter()
        .enumerate()
        .map(|(j, token)| {
            (0..positions)
                .map(|p| {
                    let probe = token.row[(p * 31 + j * 7) % dim];
                    (latent[p * LATENT_CHANNELS + (j % LATENT_CHANNELS)] * (1.0 + token.mean)
                        + probe)
                        .tanh()
                })
                .collect()
        })
        .collect()
}

fn noise_from(tokens: &[ActiveToken], maps: &AttentionMaps, positions: usize) -> Vec<f32> {
    let dim = tokens.first().map(|t| t.row.len()).unwrap_or(1);
    let n = tokens.len().max(1) as f32;
    (0..positions)
        .map(|p| {
            let mut acc = 0.0f32;
            for (j, token) in tokens.iter().enumerate() {
                acc += maps[j][p] * token.row[(p * 13 + j * 5) % dim];
            }
            acc / n
        })
        .collect()
}

impl StubBackend {
    fn run_trajectory(
        &self,
        cond: &TokenSequenceEmbedding,
        params: &GenerationParams,
        mut mode: AttentionMode<'_>,
    ) -> Result<Vec<f32>, GenerationError> {
        let uncond = self.unconditional()?.clone();
        let lw = (params.width / self.latent_factor()) as usize;
        let lh = (params.height / self.latent_factor()) as usize;
        let positions = lw * lh;

        let mut rng = ChaCha20Rng::seed_from_u64(params.seed);
        let mut latent: Vec<f32> = (0..positions * LATENT_CHANNELS)
            .map(|_| rng.random::<f32>() * 2.0 - 1.0)
            .collect();

        let cond_tokens = active_tokens(cond);
        let uncond_tokens = active_tokens(&uncond);
        let guidance = params.guidance_scale as f32;
        let steps = params.steps;
        let denom = (steps.saturating_sub(1)).max(1) as f64;

        for t in 0..steps {
            let frac = t as f64 / denom;
            let mut maps = attention_for(&cond_tokens, &latent, positions);
            match &mut mode {
                AttentionMode::Plain => {}
                AttentionMode::Record(store) => store.push(maps.clone()),
                AttentionMode::Inject { recorded, ca } => {
                    if frac >= ca.spatial_start && frac <= ca.spatial_end {
                        let step_maps = &recorded[t as usize];
                        let shared = step_maps.len().min(maps.len());
                        let token_denom = (maps.len().saturating_sub(1)).max(1) as f64;
                        for j in 0..shared {
                            let token_frac = j as f64 / token_denom;
                            if token_frac >= ca.tokens_start && token_frac <= ca.tokens_end {
                                maps[j].clone_from(&step_maps[j]);
                            }
                        }
                    }
                    for (index, weight) in &ca.token_weights {
                        for v in &mut maps[*index] {
                            *v *= *weight as f32;
                        }
                    }
                }
            }

            let uncond_maps = attention_for(&uncond_tokens, &latent, positions);
            let cond_noise = noise_from(&cond_tokens, &maps, positions);
            let uncond_noise = noise_from(&uncond_tokens, &uncond_maps, positions);
            let phase = (t as f32 * 0.37).sin();
            for p in 0..positions {
                let guided =
                    uncond_noise[p] + guidance * (cond_noise[p] - uncond_noise[p]);
                for c in 0..LATENT_CHANNELS {
                    let i = p * LATENT_CHANNELS + c;
                    latent[i] = 0.96 * latent[i] + 0.25 * (guided + 0.3 * c as f32 + phase).tanh();
                }
            }
        }
        Ok(latent)
    }

    fn decode(latent: &[f32], params: &GenerationParams, factor: u32) -> RgbImage {
        let lw = (params.width / factor) as usize;
        let mut img = RgbImage::new(params.width, params.height);
        for (x, y, pixel) in img.enumerate_pixels_mut() {
            let lx = (x / factor) as usize;
            let ly = (y / factor) as usize;
            let p = ly * lw + lx;
            let mut rgb = [0u8; 3];
            for (c, out) in rgb.iter_mut().enumerate() {
                let v = latent[p * LATENT_CHANNELS + c];
                *out = ((v.tanh() * 0.5 + 0.5) * 255.0).round() as u8;
            }
            *pixel = image::Rgb(rgb);
        }
        img
    }
}

impl DiffusionBackend for StubBackend {
    fn id(&self) -> &str {
        &self.id
    }

    fn conditioning_shape(&self) -> (usize, usize) {
        (self.encoder.context_length(), self.encoder.dim())
    }

    fn encode_prompt(&self, prompt: &str) -> Result<TokenSequenceEmbedding, GenerationError> {
        let (_, seq) = self.encoder.embed_text(prompt)?;
        Ok(seq)
    }

    fn generate(
        &self,
        cond: &TokenSequenceEmbedding,
        params: &GenerationParams,
    ) -> Result<RgbImage, GenerationError> {
        params.validate(self.latent_factor())?;
        self.check_shape(cond)?;
        let _device = self.device.lock().unwrap();
        let latent = self.run_trajectory(cond, params, AttentionMode::Plain)?;
        Ok(Self::decode(&latent, params, self.latent_factor()))
    }

    fn generate_prompt_to_prompt(
        &self,
        initial: &TokenSequenceEmbedding,
        editorial: &TokenSequenceEmbedding,
        ca: &CrossAttentionParams,
        params: &GenerationParams,
    ) -> Result<RgbImage, GenerationError> {
        params.validate(self.latent_factor())?;
        ca.validate()?;
        self.check_shape(initial)?;
        self.check_shape(editorial)?;
        let editorial_len = editorial.active_len();
        for (index, _) in &ca.token_weights {
            if *index >= editorial_len {
                return Err(GenerationError::TokenIndexOutOfRange {
                    index: *index,
                    len: editorial_len,
                });
            }
        }

        let _device = self.device.lock().unwrap();
        let mut recorded = Vec::with_capacity(params.steps as usize);
        self.run_trajectory(initial, params, AttentionMode::Record(&mut recorded))?;
        let latent = self.run_trajectory(
            editorial,
            params,
            AttentionMode::Inject {
                recorded: &recorded,
                ca,
            },
        )?;
        Ok(Self::decode(&latent, params, self.latent_factor()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_params(prompt: &str, seed: u64) -> GenerationParams {
        GenerationParams {
            prompt: prompt.into(),
            seed,
            steps: 6,
            width: 64,
            height: 64,
            ..Default::default()
        }
    }

    #[test]
    fn generation_is_bitwise_deterministic() {
        let backend = StubBackend::with_default_encoder();
        let params = small_params("childrens book style, I can see birds.", 1234);
        let cond = backend.encode_prompt(&params.prompt).unwrap();
        let a = backend.generate(&cond, &params).unwrap();
        let b = backend.generate(&cond, &params).unwrap();
        assert_eq!(a.as_raw(), b.as_raw());
    }

    #[test]
    fn different_seeds_differ() {
        let backend = StubBackend::with_default_encoder();
        let cond = backend.encode_prompt("a kite").unwrap();
        let a = backend.generate(&cond, &small_params("a kite", 1)).unwrap();
        let b = backend.generate(&cond, &small_params("a kite", 2)).unwrap();
        assert_ne!(a.as_raw(), b.as_raw());
    }

    #[test]
    fn different_prompts_differ() {
        let backend = StubBackend::with_default_encoder();
        let a_cond = backend.encode_prompt("a red kite").unwrap();
        let b_cond = backend.encode_prompt("a blue kite").unwrap();
        let params = small_params("", 1234);
        let a = backend.generate(&a_cond, &params).unwrap();
        let b = backend.generate(&b_cond, &params).unwrap();
        assert_ne!(a.as_raw(), b.as_raw());
    }

    #[test]
    fn indivisible_size_is_rejected() {
        let backend = StubBackend::with_default_encoder();
        let cond = backend.encode_prompt("x").unwrap();
        let mut params = small_params("x", 1);
        params.width = 500;
        assert!(matches!(
            backend.generate(&cond, &params),
            Err(GenerationError::InvalidSize { width: 500, .. })
        ));
    }

    #[test]
    fn wrong_context_length_is_shape_mismatch() {
        let backend = StubBackend::with_default_encoder();
        let other = crate::embedding::HashEncoder::new("other", 768, 16);
        let (_, cond) = other.embed_text("x").unwrap();
        assert!(matches!(
            backend.generate(&cond, &small_params("x", 1)),
            Err(GenerationError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn identity_edit_equals_plain_generation() {
        let backend = StubBackend::with_default_encoder();
        let params = small_params("childrens book style, I can see birds.", 1234);
        let cond = backend.encode_prompt(&params.prompt).unwrap();
        let plain = backend.generate(&cond, &params).unwrap();
        let ca = CrossAttentionParams::full_windows(params.prompt.clone());
        let edited = backend
            .generate_prompt_to_prompt(&cond, &cond, &ca, &params)
            .unwrap();
        assert_eq!(plain.as_raw(), edited.as_raw());
    }

    #[test]
    fn editorial_keyword_changes_the_image() {
        let backend = StubBackend::with_default_encoder();
        let params = small_params("childrens book style, I can see birds.", 1234);
        let initial = backend.encode_prompt(&params.prompt).unwrap();
        let editorial = backend
            .encode_prompt("childrens book style, I can see English birds.")
            .unwrap();
        let mut ca =
            CrossAttentionParams::full_windows("childrens book style, I can see English birds.");
        ca.spatial_start = 0.7;
        let plain = backend.generate(&initial, &params).unwrap();
        let edited = backend
            .generate_prompt_to_prompt(&initial, &editorial, &ca, &params)
            .unwrap();
        assert_ne!(plain.as_raw(), edited.as_raw());
    }

    #[test]
    fn inverted_window_is_rejected() {
        let backend = StubBackend::with_default_encoder();
        let params = small_params("x", 1);
        let cond = backend.encode_prompt("x").unwrap();
        let mut ca = CrossAttentionParams::full_windows("x");
        ca.spatial_start = 1.0;
        ca.spatial_end = 0.5;
        assert!(matches!(
            backend.generate_prompt_to_prompt(&cond, &cond, &ca, &params),
            Err(GenerationError::InvalidWindow { .. })
        ));
    }

    #[test]
    fn out_of_range_token_weight_is_rejected() {
        let backend = StubBackend::with_default_encoder();
        let params = small_params("a kite", 1);
        let cond = backend.encode_prompt("a kite").unwrap();
        let mut ca = CrossAttentionParams::full_windows("a kite");
        ca.token_weights = vec![(500, 2.0)];
        assert!(matches!(
            backend.generate_prompt_to_prompt(&cond, &cond, &ca, &params),
            Err(GenerationError::TokenIndexOutOfRange { index: 500, .. })
        ));
    }

    #[test]
    fn token_weights_change_the_image() {
        let backend = StubBackend::with_default_encoder();
        let params = small_params("a red kite in the sky", 9);
        let cond = backend.encode_prompt(&params.prompt).unwrap();
        let mut ca = CrossAttentionParams::full_windows(params.prompt.clone());
        let identity = backend
            .generate_prompt_to_prompt(&cond, &cond, &ca, &params)
            .unwrap();
        ca.token_weights = vec![(2, 3.0)];
        let weighted = backend
            .generate_prompt_to_prompt(&cond, &cond, &ca, &params)
            .unwrap();
        assert_ne!(identity.as_raw(), weighted.as_raw());
    }

    #[test]
    fn masked_conditioning_changes_the_image() {
        let backend = StubBackend::with_default_encoder();
        let params = small_params("A photo of an old man sitting", 1234);
        let cond = backend.encode_prompt(&params.prompt).unwrap();
        let profile = crate::prompt::CultureProfile::defaults()
            .into_iter()
            .find(|p| p.name == "indian")
            .unwrap();
        let mask = crate::embedding::build_culture_mask(backend.encoder(), &profile).unwrap();
        let masked = crate::embedding::apply_mask(&cond, &mask).unwrap();
        let plain = backend.generate(&cond, &params).unwrap();
        let shifted = backend.generate(&masked, &params).unwrap();
        assert_ne!(plain.as_raw(), shifted.as_raw());
    }
}
