//! Diffusion backends and the three generation pathways.

mod backend;
mod generator;
mod stub;

pub use backend::DiffusionBackend;
pub use generator::{seed_search, Generator};
pub use stub::StubBackend;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::EmbeddingError;

pub const DEFAULT_SEED: u64 = 1234;
pub const DEFAULT_GUIDANCE: f64 = 7.5;
pub const DEFAULT_STEPS: u32 = 50;
pub const DEFAULT_SIZE: u32 = 512;
pub const DEFAULT_DIFFUSION_MODEL: &str = "stable-diffusion v1.5";

/// Parameters of one generation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationParams {
    pub prompt: String,
    pub seed: u64,
    pub guidance_scale: f64,
    pub steps: u32,
    pub width: u32,
    pub height: u32,
    pub model_id: String,
}

impl Default for GenerationParams {
    fn default() -> Self {
        GenerationParams {
            prompt: String::new(),
            seed: DEFAULT_SEED,
            guidance_scale: DEFAULT_GUIDANCE,
            steps: DEFAULT_STEPS,
            width: DEFAULT_SIZE,
            height: DEFAULT_SIZE,
            model_id: DEFAULT_DIFFUSION_MODEL.to_string(),
        }
    }
}

impl GenerationParams {
    pub fn with_prompt(prompt: impl Into<String>) -> Self {
        GenerationParams {
            prompt: prompt.into(),
            ..Default::default()
        }
    }

    /// Checks size divisibility against the backend's latent factor and the
    /// numeric parameter ranges.
    pub fn validate(&self, latent_factor: u32) -> Result<(), GenerationError> {
        if self.width == 0
            || self.height == 0
            || self.width % latent_factor != 0
            || self.height % latent_factor != 0
        {
            return Err(GenerationError::InvalidSize {
                width: self.width,
                height: self.height,
                factor: latent_factor,
            });
        }
        if !self.guidance_scale.is_finite() || self.guidance_scale < 0.0 {
            return Err(GenerationError::InvalidParams(format!(
                "guidance_scale {} must be finite and >= 0",
                self.guidance_scale
            )));
        }
        if self.steps == 0 {
            return Err(GenerationError::InvalidParams("steps must be >= 1".into()));
        }
        Ok(())
    }
}

/// Cross-attention control surface for prompt-to-prompt editing.
///
/// The spatial window is the fraction of the denoising schedule during
/// which attention maps recorded from the initial prompt's trajectory are
/// injected into the editorial trajectory; the token window restricts
/// injection along the token axis. `token_weights` scales the editorial
/// prompt's cross-attention per token.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossAttentionParams {
    pub editorial_prompt: String,
    pub spatial_start: f64,
    pub spatial_end: f64,
    pub tokens_start: f64,
    pub tokens_end: f64,
    #[serde(default)]
    pub token_weights: Vec<(usize, f64)>,
}

impl CrossAttentionParams {
    /// Full windows, no re-weighting.
    pub fn full_windows(editorial_prompt: impl Into<String>) -> Self {
        CrossAttentionParams {
            editorial_prompt: editorial_prompt.into(),
            spatial_start: 0.0,
            spatial_end: 1.0,
            tokens_start: 0.0,
            tokens_end: 1.0,
            token_weights: Vec::new(),
        }
    }

    /// Validates windows; token indices are checked against the editorial
    /// conditioning by the backend, which knows the tokenization.
    pub fn validate(&self) -> Result<(), GenerationError> {
        for (name, v) in [
            ("spatial_start", self.spatial_start),
            ("spatial_end", self.spatial_end),
            ("tokens_start", self.tokens_start),
            ("tokens_end", self.tokens_end),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(GenerationError::InvalidParams(format!(
                    "{name} {v} out of [0, 1]"
                )));
            }
        }
        if self.spatial_end <= self.spatial_start {
            return Err(GenerationError::InvalidWindow {
                start: self.spatial_start,
                end: self.spatial_end,
            });
        }
        if self.tokens_end < self.tokens_start {
            return Err(GenerationError::InvalidWindow {
                start: self.tokens_start,
                end: self.tokens_end,
            });
        }
        Ok(())
    }
}

/// Which conditioning pathway produced an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    M1,
    M2,
    M3,
}

impl Method {
    pub fn dir_name(self) -> &'static str {
        match self {
            Method::M1 => "m1",
            Method::M2 => "m2",
            Method::M3 => "m3",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::M1 => "Method 1",
            Method::M2 => "Method 2",
            Method::M3 => "Method 3",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "m1" | "M1" => Ok(Method::M1),
            "2" | "m2" | "M2" => Ok(Method::M2),
            "3" | "m3" | "M3" => Ok(Method::M3),
            other => Err(format!("unknown method {other:?}, expected 1, 2, or 3")),
        }
    }
}

/// Provenance of an applied culture mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskDescriptor {
    pub source_text: String,
    pub multiplier: f64,
    /// Hex digest of the mask's pooled vector bytes.
    pub digest: String,
}

impl MaskDescriptor {
    pub fn from_mask(mask: &crate::embedding::CultureMask) -> Self {
        let mut bytes = Vec::with_capacity(mask.pooled.vector.len() * 4);
        for x in &mask.pooled.vector {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
        MaskDescriptor {
            source_text: mask.source_text.clone(),
            multiplier: mask.multiplier,
            digest: crate::output::sha256_hex(&bytes),
        }
    }
}

/// Reproducibility record written next to every generated image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub schema_version: u32,
    pub params: GenerationParams,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_attention: Option<CrossAttentionParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask_ref: Option<MaskDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_path: Option<PathBuf>,
    /// SHA-256 of the PNG bytes on disk.
    pub image_hash: String,
    /// Seconds spent in the backend.
    pub wall_time: f64,
}

pub const RECORD_SCHEMA_VERSION: u32 = 1;

impl GenerationRecord {
    /// Method-specific field population: keyword prompts carry neither mask
    /// nor attention control, mask runs carry no attention control, and
    /// attention runs always carry their control parameters.
    pub fn validate(&self) -> Result<(), GenerationError> {
        let ok = match self.method {
            Method::M1 => self.cross_attention.is_none() && self.mask_ref.is_none(),
            Method::M2 => self.cross_attention.is_none(),
            Method::M3 => self.cross_attention.is_some() && self.mask_ref.is_none(),
        };
        if ok {
            Ok(())
        } else {
            Err(GenerationError::InvalidParams(format!(
                "record fields inconsistent with {:?}",
                self.method
            )))
        }
    }
}

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("image size {width}x{height} not divisible by latent factor {factor}")]
    InvalidSize { width: u32, height: u32, factor: u32 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid window: end {end} must be greater than start {start}")]
    InvalidWindow { start: f64, end: f64 },
    #[error("token weight index {index} out of range for {len} prompt tokens")]
    TokenIndexOutOfRange { index: usize, len: usize },
    #[error("conditioning shape {got:?} does not match backend shape {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("backend failure: {0}")]
    BackendFailure(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
