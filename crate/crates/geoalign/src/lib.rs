//! Batch tooling for geo-localizing children's book illustrations.
//!
//! Given per-page story text and a target culture, the pipeline produces
//! culturally aligned images through three conditioning pathways:
//!
//! 1. keyword prompt augmentation on top of a POS-pruned prompt,
//! 2. additive culture masks applied to text-encoder embeddings,
//! 3. editorial prompts steering cross-attention during denoising,
//!
//! and evaluates the output sets with Fréchet Inception Distance and
//! Likert survey aggregation.
//!
//! The crate is organized around the pipeline stages:
//! - [`corpus`]: book folder ingestion and page-text lints
//! - [`prompt`]: POS tagging, prompt processing, editorial prompts
//! - [`embedding`]: text/image encoders, cosine similarity, culture masks
//! - [`generation`]: diffusion backends and the three generation pathways
//! - [`evaluation`]: Inception features, Fréchet distance, survey tables

pub mod corpus;
pub mod embedding;
pub mod evaluation;
pub mod generation;
pub mod output;
pub mod prompt;
