//! Quantitative evaluation (Inception features + Fréchet distance) and
//! survey (Likert) aggregation.

mod features;
mod fid;
mod likert;

pub use features::{FeatureExtractor, FeatureSet, HashInceptionExtractor, INCEPTION_FEATURE_DIM};
pub use fid::{fid_report, frechet_distance, FidReport, FidRow};
pub use likert::{
    likert_aggregate, likert_aggregate_scores, read_survey_csv, LikertTable, Rating, ScoredResponse,
    SurveyResponse,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("need at least 2 images, got {0}")]
    TooFewImages(usize),
    #[error("cannot decode image {0}")]
    BadImage(String),
    #[error("feature extractor {0} unavailable")]
    ModelUnavailable(String),
    #[error("feature dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix square root failed: {0}")]
    NumericalFailure(String),
    #[error("no responses to aggregate")]
    EmptyInput,
    #[error("invalid survey row {row}: {reason}")]
    BadSurveyRow { row: usize, reason: String },
    #[error("image set {label}: {source}")]
    ImageSet {
        label: String,
        #[source]
        source: Box<EvalError>,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
