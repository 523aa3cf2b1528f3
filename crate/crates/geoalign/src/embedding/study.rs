//! Cross-language embedding similarity study.
//!
//! Takes aligned word lists (one word per line, aligned across languages by
//! line number), embeds every word, and reports:
//! - the mean cosine similarity between translated word pairs for each
//!   language pair, and
//! - the pairwise cosine similarities of the per-language mean vectors.
//!
//! The same machinery serves singular-concept comparisons by passing
//! concept keys as one-entry "word lists".

use std::path::Path;

use nalgebra::DMatrix;

use super::{cosine_of_slices, Embedding, EmbeddingError, Modality, TextImageEncoder};

#[derive(Debug, Clone)]
pub struct LanguageStudy {
    pub languages: Vec<String>,
    /// Mean cosine similarity between aligned word pairs, per language pair.
    pub word_pair_similarity: DMatrix<f64>,
    /// One mean vector per language.
    pub mean_vectors: Vec<Embedding>,
    /// Cosine similarity between language mean vectors.
    pub mean_vector_similarity: DMatrix<f64>,
}

/// Runs the study over aligned word lists, ordered as given.
pub fn run_language_study(
    encoder: &dyn TextImageEncoder,
    word_lists: &[(String, Vec<String>)],
) -> Result<LanguageStudy, EmbeddingError> {
    if word_lists.len() < 2 {
        return Err(EmbeddingError::TooFewLanguages);
    }
    let expected = word_lists[0].1.len();
    for (language, words) in word_lists {
        if words.len() != expected {
            return Err(EmbeddingError::MisalignedWordList(
                language.clone(),
                words.len(),
                expected,
            ));
        }
    }

    let n = word_lists.len();
    let mut embeddings: Vec<Vec<Embedding>> = Vec::with_capacity(n);
    for (_, words) in word_lists {
        let mut per_language = Vec::with_capacity(words.len());
        for word in words {
            let (pooled, _) = encoder.embed_text(word)?;
            per_language.push(pooled);
        }
        embeddings.push(per_language);
    }

    let mut word_pair_similarity = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = 0.0;
            for (ea, eb) in embeddings[a].iter().zip(embeddings[b].iter()) {
                acc += cosine_of_slices(&ea.vector, &eb.vector)?;
            }
            word_pair_similarity[(a, b)] = acc / expected.max(1) as f64;
        }
    }

    let dim = encoder.dim();
    let mut mean_vectors = Vec::with_capacity(n);
    for (i, (language, _)) in word_lists.iter().enumerate() {
        let mut mean = vec![0.0f64; dim];
        for e in &embeddings[i] {
            for (j, x) in e.vector.iter().enumerate() {
                mean[j] += *x as f64;
            }
        }
        let count = embeddings[i].len().max(1) as f64;
        let vector: Vec<f32> = mean.into_iter().map(|x| (x / count) as f32).collect();
        mean_vectors.push(Embedding::new(
            vector,
            Modality::Text,
            format!("{}:mean:{language}", encoder.model_id()),
        ));
    }

    let mut mean_vector_similarity = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            mean_vector_similarity[(a, b)] =
                cosine_of_slices(&mean_vectors[a].vector, &mean_vectors[b].vector)?;
        }
    }

    Ok(LanguageStudy {
        languages: word_lists.iter().map(|(l, _)| l.clone()).collect(),
        word_pair_similarity,
        mean_vectors,
        mean_vector_similarity,
    })
}

impl LanguageStudy {
    /// Largest gap between any two off-diagonal mean-vector similarities.
    pub fn mean_vector_similarity_spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let n = self.languages.len();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let v = self.mean_vector_similarity[(a, b)];
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if lo.is_finite() {
            hi - lo
        } else {
            0.0
        }
    }

    /// Writes both similarity matrices as CSV.
    pub fn write_csv(&self, path: &Path) -> Result<(), EmbeddingError> {
        let mut w = csv::Writer::from_path(path).map_err(io_err)?;
        let mut header = vec!["matrix".to_string(), "language".to_string()];
        header.extend(self.languages.iter().cloned());
        w.write_record(&header).map_err(io_err)?;
        for (name, matrix) in [
            ("word_pairs", &self.word_pair_similarity),
            ("mean_vectors", &self.mean_vector_similarity),
        ] {
            for (i, language) in self.languages.iter().enumerate() {
                let mut row = vec![name.to_string(), language.clone()];
                for j in 0..self.languages.len() {
                    row.push(format!("{:.6}", matrix[(i, j)]));
                }
                w.write_record(&row).map_err(io_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Renders the mean-vector similarity matrix as a heatmap image
    /// (blue = low, red = high), one block per cell.
    pub fn write_heatmap(&self, path: &Path) -> Result<(), EmbeddingError> {
        const CELL: u32 = 48;
        let n = self.languages.len() as u32;
        let mut img = image::RgbImage::new(n * CELL, n * CELL);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in self.mean_vector_similarity.iter() {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        let range = (hi - lo).max(1e-12);
        for a in 0..n {
            for b in 0..n {
                let v = self.mean_vector_similarity[(a as usize, b as usize)];
                let t = ((v - lo) / range) as f32;
                let color = image::Rgb([
                    (t * 255.0) as u8,
                    (40.0 + 60.0 * (1.0 - (2.0 * t - 1.0).abs())) as u8,
                    ((1.0 - t) * 255.0) as u8,
                ]);
                for y in 0..CELL {
                    for x in 0..CELL {
                        img.put_pixel(b * CELL + x, a * CELL + y, color);
                    }
                }
            }
        }
        img.save(path)
            .map_err(|e| EmbeddingError::BadImage(e.to_string()))?;
        Ok(())
    }
}

fn io_err(e: csv::Error) -> EmbeddingError {
    EmbeddingError::Io(std::io::Error::other(e))
}

/// Reads a word-list file: one word per line, UTF-8, blank lines skipped.
pub fn read_word_list(path: &Path) -> Result<Vec<String>, EmbeddingError> {
    let raw = std::fs::read_to_string(path)?;
    Ok(raw
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}
