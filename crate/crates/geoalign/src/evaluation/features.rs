//! Image feature extraction for distribution-level comparison.
//!
//! Images are resized to 299x299 (bilinear) and mapped to one
//! 2048-dimensional feature vector each, the pooled feature width of
//! Inception V3. [`HashInceptionExtractor`] is the weight-free stand-in:
//! deterministic features derived from the resized pixels, preserving
//! order, duplication, and dimensionality semantics. A model-backed
//! extractor implements the same trait when weights are configured.

use image::RgbImage;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use super::EvalError;

pub const INCEPTION_FEATURE_DIM: usize = 2048;
pub const INCEPTION_INPUT_SIZE: u32 = 299;

/// A batch of per-image feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    /// N x D, one row per image, in input order.
    pub features: DMatrix<f64>,
    pub source_label: String,
    pub extractor_id: String,
}

impl FeatureSet {
    /// Validates the covariance precondition (N >= 2) and finiteness.
    pub fn new(
        features: DMatrix<f64>,
        source_label: impl Into<String>,
        extractor_id: impl Into<String>,
    ) -> Result<Self, EvalError> {
        if features.nrows() < 2 {
            return Err(EvalError::TooFewImages(features.nrows()));
        }
        if features.iter().any(|x| !x.is_finite()) {
            return Err(EvalError::NumericalFailure(
                "non-finite feature value".into(),
            ));
        }
        Ok(FeatureSet {
            features,
            source_label: source_label.into(),
            extractor_id: extractor_id.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.features.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.features.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    /// Stacks two sets row-wise (for pooled rows).
    pub fn concat(&self, other: &FeatureSet, label: impl Into<String>) -> Result<Self, EvalError> {
        if self.dim() != other.dim() {
            return Err(EvalError::DimensionMismatch(self.dim(), other.dim()));
        }
        let mut stacked = DMatrix::zeros(self.len() + other.len(), self.dim());
        stacked.rows_mut(0, self.len()).copy_from(&self.features);
        stacked
            .rows_mut(self.len(), other.len())
            .copy_from(&other.features);
        FeatureSet::new(stacked, label, self.extractor_id.clone())
    }
}

/// Maps decoded images to feature rows, order-preserving and deterministic
/// for fixed weights.
pub trait FeatureExtractor: Send + Sync {
    fn extractor_id(&self) -> &str;
    fn feature_dim(&self) -> usize;
    fn extract(&self, images: &[RgbImage], source_label: &str) -> Result<FeatureSet, EvalError>;
}

/// Weight-free extractor: hash-derived features of the resized image.
#[derive(Debug, Clone)]
pub struct HashInceptionExtractor {
    id: String,
}

impl Default for HashInceptionExtractor {
    fn default() -> Self {
        HashInceptionExtractor {
            id: "hash:inception-v3-pool".into(),
        }
    }
}

impl FeatureExtractor for HashInceptionExtractor {
    fn extractor_id(&self) -> &str {
        &self.id
    }

    fn feature_dim(&self) -> usize {
        INCEPTION_FEATURE_DIM
    }

    fn extract(&self, images: &[RgbImage], source_label: &str) -> Result<FeatureSet, EvalError> {
        if images.len() < 2 {
            return Err(EvalError::TooFewImages(images.len()));
        }
        let mut features = DMatrix::zeros(images.len(), INCEPTION_FEATURE_DIM);
        for (i, image) in images.iter().enumerate() {
            if image.width() == 0 || image.height() == 0 {
                return Err(EvalError::BadImage(format!("image {i} is empty")));
            }
            let resized = image::imageops::resize(
                image,
                INCEPTION_INPUT_SIZE,
                INCEPTION_INPUT_SIZE,
                image::imageops::FilterType::Triangle,
            );
            let mut hasher = Sha256::new();
            hasher.update(self.id.as_bytes());
            hasher.update(resized.as_raw());
            let seed: [u8; 32] = hasher.finalize().into();
            let mut rng = ChaCha20Rng::from_seed(seed);
            for j in 0..INCEPTION_FEATURE_DIM {
                features[(i, j)] = rng.random::<f64>() * 2.0 - 1.0;
            }
        }
        FeatureSet::new(features, source_label, self.id.clone())
    }
}

/// Decodes every `.png` in a directory, sorted by file name.
pub fn load_images_dir(dir: &std::path::Path) -> Result<Vec<RgbImage>, EvalError> {
    if !dir.is_dir() {
        return Err(EvalError::BadImage(format!(
            "{} is not a directory",
            dir.display()
        )));
    }
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "png"))
        .collect();
    paths.sort();
    let mut images = Vec::with_capacity(paths.len());
    for path in paths {
        let img = image::open(&path)
            .map_err(|e| EvalError::BadImage(format!("{}: {e}", path.display())))?
            .to_rgb8();
        images.push(img);
    }
    Ok(images)
}
