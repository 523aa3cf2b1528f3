//! The operation layer over a diffusion backend: builds reproducibility
//! records around each pathway and persists image + manifest atomically.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use image::RgbImage;

use super::backend::DiffusionBackend;
use super::{
    CrossAttentionParams, GenerationError, GenerationParams, GenerationRecord, MaskDescriptor,
    Method, RECORD_SCHEMA_VERSION,
};
use crate::embedding::{cosine_similarity, TextImageEncoder, TokenSequenceEmbedding};
use crate::output;

pub struct Generator {
    backend: Arc<dyn DiffusionBackend>,
}

impl Generator {
    pub fn new(backend: Arc<dyn DiffusionBackend>) -> Self {
        Generator { backend }
    }

    pub fn backend(&self) -> &dyn DiffusionBackend {
        self.backend.as_ref()
    }

    /// Plain text-to-image: encode the prompt, generate.
    pub fn txt2img(
        &self,
        params: &GenerationParams,
    ) -> Result<(RgbImage, GenerationRecord), GenerationError> {
        let started = Instant::now();
        let cond = self.backend.encode_prompt(&params.prompt)?;
        let image = self.backend.generate(&cond, params)?;
        self.finish(image, params.clone(), Method::M1, None, None, started)
    }

    /// Generation from a pre-built conditioning sequence (the mask
    /// pathway). `params.prompt` is ignored by the backend and cleared in
    /// the record; provenance of an applied mask travels in `mask_ref`.
    pub fn from_embedding(
        &self,
        cond: &TokenSequenceEmbedding,
        params: &GenerationParams,
        mask_ref: Option<MaskDescriptor>,
    ) -> Result<(RgbImage, GenerationRecord), GenerationError> {
        let started = Instant::now();
        let image = self.backend.generate(cond, params)?;
        let mut recorded = params.clone();
        recorded.prompt = String::new();
        self.finish(image, recorded, Method::M2, None, mask_ref, started)
    }

    /// Prompt-to-prompt with cross-attention control.
    pub fn prompt_to_prompt(
        &self,
        params: &GenerationParams,
        ca: &CrossAttentionParams,
    ) -> Result<(RgbImage, GenerationRecord), GenerationError> {
        let started = Instant::now();
        ca.validate()?;
        let initial = self.backend.encode_prompt(&params.prompt)?;
        let editorial = self.backend.encode_prompt(&ca.editorial_prompt)?;
        let image = self
            .backend
            .generate_prompt_to_prompt(&initial, &editorial, ca, params)?;
        self.finish(
            image,
            params.clone(),
            Method::M3,
            Some(ca.clone()),
            None,
            started,
        )
    }

    fn finish(
        &self,
        image: RgbImage,
        params: GenerationParams,
        method: Method,
        cross_attention: Option<CrossAttentionParams>,
        mask_ref: Option<MaskDescriptor>,
        started: Instant,
    ) -> Result<(RgbImage, GenerationRecord), GenerationError> {
        let png = output::encode_png(&image)?;
        let record = GenerationRecord {
            schema_version: RECORD_SCHEMA_VERSION,
            params,
            method,
            cross_attention,
            mask_ref,
            image_path: None,
            image_hash: output::sha256_hex(&png),
            wall_time: started.elapsed().as_secs_f64(),
        };
        record.validate()?;
        Ok((image, record))
    }

    /// Writes the image and its manifest atomically next to each other and
    /// returns the record with `image_path` filled in.
    pub fn persist(
        &self,
        image: &RgbImage,
        record: &GenerationRecord,
        image_path: &Path,
    ) -> Result<GenerationRecord, GenerationError> {
        let png = output::encode_png(image)?;
        let hash = output::sha256_hex(&png);
        if hash != record.image_hash {
            return Err(GenerationError::BackendFailure(
                "image bytes changed between generation and persist".into(),
            ));
        }
        output::write_atomic(image_path, &png)?;
        let mut persisted = record.clone();
        persisted.image_path = Some(image_path.to_path_buf());
        let manifest_path = output::manifest_path_for(image_path);
        let json = serde_json::to_vec_pretty(&persisted)
            .map_err(|e| GenerationError::BackendFailure(e.to_string()))?;
        output::write_atomic(&manifest_path, &json)?;
        Ok(persisted)
    }
}

/// Generates `n` images with seeds `base_seed..base_seed + n`, scores each
/// against the reference image by embedding cosine similarity, and returns
/// all (seed, similarity) pairs sorted by descending similarity (ties by
/// ascending seed).
pub fn seed_search(
    generator: &Generator,
    encoder: &dyn TextImageEncoder,
    prompt: &str,
    reference: &RgbImage,
    n: u64,
    base_seed: u64,
) -> Result<Vec<(u64, f64)>, GenerationError> {
    let params = GenerationParams::with_prompt(prompt);
    seed_search_with_params(generator, encoder, &params, reference, n, base_seed)
}

/// Seed search with explicit generation parameters (size and step count
/// matter for runtime).
pub fn seed_search_with_params(
    generator: &Generator,
    encoder: &dyn TextImageEncoder,
    base_params: &GenerationParams,
    reference: &RgbImage,
    n: u64,
    base_seed: u64,
) -> Result<Vec<(u64, f64)>, GenerationError> {
    if n == 0 {
        return Err(GenerationError::InvalidParams("n must be >= 1".into()));
    }
    let reference_embedding = encoder.embed_image(reference)?;
    let cond = generator.backend.encode_prompt(&base_params.prompt)?;
    let mut params = base_params.clone();
    let mut scored = Vec::with_capacity(n as usize);
    for seed in base_seed..base_seed + n {
        params.seed = seed;
        let image = generator.backend.generate(&cond, &params)?;
        let embedding = encoder.embed_image(&image)?;
        let similarity = cosine_similarity(&embedding, &reference_embedding)?;
        scored.push((seed, similarity));
    }
    scored.sort_by(|(sa, a), (sb, b)| {
        b.partial_cmp(a)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(sa.cmp(sb))
    });
    Ok(scored)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::StubBackend;

    fn stub_generator() -> (Generator, Arc<StubBackend>) {
        let backend = Arc::new(StubBackend::with_default_encoder());
        (Generator::new(backend.clone()), backend)
    }

    fn small(prompt: &str, seed: u64) -> GenerationParams {
        GenerationParams {
            prompt: prompt.into(),
            seed,
            steps: 5,
            width: 64,
            height: 64,
            ..Default::default()
        }
    }

    #[test]
    fn txt2img_record_is_complete() {
        let (generator, _) = stub_generator();
        let params = small("childrens book style, I can see birds.", 1234);
        let (image, record) = generator.txt2img(&params).unwrap();
        assert_eq!(record.params.prompt, params.prompt);
        assert_eq!(record.params.seed, 1234);
        assert_eq!(record.method, Method::M1);
        assert!(record.cross_attention.is_none());
        assert!(record.mask_ref.is_none());
        let png = output::encode_png(&image).unwrap();
        assert_eq!(record.image_hash, output::sha256_hex(&png));
    }

    #[test]
    fn pathway_equivalence_unmasked() {
        let (generator, backend) = stub_generator();
        let params = small("Grandma has big mango tree in her garden.", 1234);
        let (via_prompt, _) = generator.txt2img(&params).unwrap();
        let cond = backend.encode_prompt(&params.prompt).unwrap();
        let (via_embedding, record) = generator.from_embedding(&cond, &params, None).unwrap();
        assert_eq!(via_prompt.as_raw(), via_embedding.as_raw());
        assert_eq!(record.method, Method::M2);
        assert_eq!(record.params.prompt, "");
    }

    #[test]
    fn persist_round_trip() {
        let (generator, _) = stub_generator();
        let dir = tempfile::tempdir().unwrap();
        let params = small("a kite", 7);
        let (image, record) = generator.txt2img(&params).unwrap();
        let path = dir.path().join("page_01.png");
        let persisted = generator.persist(&image, &record, &path).unwrap();
        assert_eq!(persisted.image_path.as_deref(), Some(path.as_path()));
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(output::sha256_hex(&bytes), persisted.image_hash);
        let manifest = std::fs::read_to_string(dir.path().join("page_01.manifest.json")).unwrap();
        let parsed: GenerationRecord = serde_json::from_str(&manifest).unwrap();
        assert_eq!(parsed.image_hash, persisted.image_hash);
        assert_eq!(parsed.params.seed, 7);
    }

    #[test]
    fn seed_search_finds_the_reference_seed() {
        let (generator, backend) = stub_generator();
        let params = small("indian childrens book style, Grandma has big mango tree", 0);
        let mut reference_params = params.clone();
        reference_params.seed = 7;
        let cond = backend.encode_prompt(&params.prompt).unwrap();
        let reference = backend.generate(&cond, &reference_params).unwrap();

        let ranked = seed_search_with_params(
            &generator,
            backend.encoder(),
            &params,
            &reference,
            10,
            0,
        )
        .unwrap();
        assert_eq!(ranked.len(), 10);
        assert_eq!(ranked[0].0, 7);
        assert!((ranked[0].1 - 1.0).abs() < 1e-12);
        for pair in ranked.windows(2) {
            assert!(pair[0].1 >= pair[1].1);
        }
        for (_, similarity) in &ranked {
            assert!((-1.0..=1.0).contains(similarity));
        }
    }

    #[test]
    fn seed_search_single_candidate() {
        let (generator, backend) = stub_generator();
        let params = small("a kite", 3);
        let cond = backend.encode_prompt(&params.prompt).unwrap();
        let reference = backend.generate(&cond, &params).unwrap();
        let ranked =
            seed_search_with_params(&generator, backend.encoder(), &params, &reference, 1, 3)
                .unwrap();
        assert_eq!(ranked.len(), 1);
        assert_eq!(ranked[0].0, 3);
    }

    #[test]
    fn zero_candidates_is_an_error() {
        let (generator, backend) = stub_generator();
        let img = RgbImage::new(8, 8);
        assert!(seed_search(&generator, backend.encoder(), "x", &img, 0, 0).is_err());
    }
}
