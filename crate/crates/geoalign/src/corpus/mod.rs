//! Book folder ingestion and page-text suitability lints.
//!
//! A book lives in a directory with a `book.yaml` manifest and a `pages/`
//! subdirectory holding `NN.txt` / `NN.png` pairs (`NN` = `01`..`99`).

mod lint;

pub use lint::{lint_book, lint_page, LintCode, LintFinding};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A children's book: ordered pages of story text paired with the original
/// illustrations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Book {
    pub id: String,
    pub title: String,
    pub origin_culture: String,
    /// Pages in strictly increasing index order; never empty.
    pub pages: Vec<Page>,
}

/// One page: text plus the path to the original illustration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    /// 1-based page number.
    pub index: u32,
    pub text: String,
    pub image_path: PathBuf,
}

/// Keys of the `book.yaml` manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BookManifest {
    pub id: String,
    pub title: String,
    pub origin_culture: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_url: Option<String>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("book directory {0} does not exist")]
    MissingDirectory(PathBuf),
    #[error("missing book manifest {0}")]
    MissingManifest(PathBuf),
    #[error("invalid book manifest {path}: {source}")]
    BadManifest {
        path: PathBuf,
        source: serde_yaml::Error,
    },
    #[error("book has no page text/image pairs")]
    EmptyBook,
    #[error("page {page:02} has {found} but no matching {missing}")]
    MissingAsset {
        page: u32,
        found: &'static str,
        missing: &'static str,
    },
    #[error("page {page:02} text is not valid UTF-8")]
    BadEncoding { page: u32 },
    #[error("page {page:02} text is empty")]
    EmptyPageText { page: u32 },
    #[error("origin_culture must be non-empty")]
    EmptyOriginCulture,
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Loads a book folder into memory.
///
/// One [`Page`] is produced per `NN.txt`/`NN.png` pair under `pages/`,
/// ordered by page number. Files that do not match the two-digit naming
/// scheme are ignored. Loading the same directory twice yields structurally
/// equal books.
pub fn load_book(dir: &Path) -> Result<Book, CorpusError> {
    if !dir.is_dir() {
        return Err(CorpusError::MissingDirectory(dir.to_path_buf()));
    }
    let manifest_path = dir.join("book.yaml");
    if !manifest_path.is_file() {
        return Err(CorpusError::MissingManifest(manifest_path));
    }
    let raw = std::fs::read_to_string(&manifest_path).map_err(|source| CorpusError::Io {
        path: manifest_path.clone(),
        source,
    })?;
    let manifest: BookManifest =
        serde_yaml::from_str(&raw).map_err(|source| CorpusError::BadManifest {
            path: manifest_path,
            source,
        })?;
    if manifest.origin_culture.trim().is_empty() {
        return Err(CorpusError::EmptyOriginCulture);
    }

    let pages_dir = dir.join("pages");
    let mut texts = std::collections::BTreeMap::new();
    let mut images = std::collections::BTreeMap::new();
    if pages_dir.is_dir() {
        let entries = std::fs::read_dir(&pages_dir).map_err(|source| CorpusError::Io {
            path: pages_dir.clone(),
            source,
        })?;
        for entry in entries {
            let entry = entry.map_err(|source| CorpusError::Io {
                path: pages_dir.clone(),
                source,
            })?;
            let path = entry.path();
            let (Some(stem), Some(ext)) = (
                path.file_stem().and_then(|s| s.to_str()),
                path.extension().and_then(|s| s.to_str()),
            ) else {
                continue;
            };
            let Some(index) = parse_page_number(stem) else {
                continue;
            };
            match ext {
                "txt" => {
                    texts.insert(index, path);
                }
                "png" => {
                    images.insert(index, path);
                }
                _ => {}
            }
        }
    }

    if texts.is_empty() && images.is_empty() {
        return Err(CorpusError::EmptyBook);
    }
    for index in texts.keys() {
        if !images.contains_key(index) {
            return Err(CorpusError::MissingAsset {
                page: *index,
                found: "text",
                missing: "image",
            });
        }
    }
    for index in images.keys() {
        if !texts.contains_key(index) {
            return Err(CorpusError::MissingAsset {
                page: *index,
                found: "image",
                missing: "text",
            });
        }
    }

    let mut pages = Vec::with_capacity(texts.len());
    for (index, text_path) in texts {
        let bytes = std::fs::read(&text_path).map_err(|source| CorpusError::Io {
            path: text_path.clone(),
            source,
        })?;
        let text =
            String::from_utf8(bytes).map_err(|_| CorpusError::BadEncoding { page: index })?;
        if text.trim().is_empty() {
            return Err(CorpusError::EmptyPageText { page: index });
        }
        pages.push(Page {
            index,
            text,
            image_path: images[&index].clone(),
        });
    }

    Ok(Book {
        id: manifest.id,
        title: manifest.title,
        origin_culture: manifest.origin_culture,
        pages,
    })
}

/// Two-digit zero-padded page numbers, `01`..`99`.
fn parse_page_number(stem: &str) -> Option<u32> {
    if stem.len() != 2 || !stem.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: u32 = stem.parse().ok()?;
    (n >= 1).then_some(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write_book(dir: &Path, pages: &[(u32, &str)]) {
        fs::create_dir_all(dir.join("pages")).unwrap();
        fs::write(
            dir.join("book.yaml"),
            "id: mango-tree\ntitle: The Mango Tree\norigin_culture: indian\n",
        )
        .unwrap();
        for (index, text) in pages {
            fs::write(dir.join(format!("pages/{index:02}.txt")), text).unwrap();
            // A 1x1 PNG is enough for pairing checks.
            let img = image::RgbImage::new(1, 1);
            img.save(dir.join(format!("pages/{index:02}.png"))).unwrap();
        }
    }

    #[test]
    fn loads_all_pages_in_order() {
        let tmp = tempfile::tempdir().unwrap();
        write_book(
            tmp.path(),
            &[
                (1, "We like to visit Grandma's village."),
                (2, "Grandma has a big mango tree in her garden. Many birds come there."),
                (3, "I like to hide in the mango tree. No one can see me here."),
                (4, "Father looks for me near the well."),
                (5, "Oh no. At last, Grandma's dog finds me."),
                (6, "Now I have to climb down. Grandma gives me a big hug."),
            ],
        );
        let book = load_book(tmp.path()).unwrap();
        assert_eq!(book.origin_culture, "indian");
        assert_eq!(book.pages.len(), 6);
        let indices: Vec<u32> = book.pages.iter().map(|p| p.index).collect();
        assert_eq!(indices, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn load_is_deterministic() {
        let tmp = tempfile::tempdir().unwrap();
        write_book(tmp.path(), &[(1, "One page."), (2, "Two pages.")]);
        let a = load_book(tmp.path()).unwrap();
        let b = load_book(tmp.path()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn text_without_image_is_missing_asset() {
        let tmp = tempfile::tempdir().unwrap();
        write_book(tmp.path(), &[(1, "First page.")]);
        fs::write(tmp.path().join("pages/02.txt"), "No picture.").unwrap();
        let err = load_book(tmp.path()).unwrap_err();
        match err {
            CorpusError::MissingAsset { page, missing, .. } => {
                assert_eq!(page, 2);
                assert_eq!(missing, "image");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn empty_folder_is_empty_book() {
        let tmp = tempfile::tempdir().unwrap();
        write_book(tmp.path(), &[]);
        assert!(matches!(load_book(tmp.path()), Err(CorpusError::EmptyBook)));
    }

    #[test]
    fn invalid_utf8_is_bad_encoding() {
        let tmp = tempfile::tempdir().unwrap();
        write_book(tmp.path(), &[(1, "ok")]);
        fs::write(tmp.path().join("pages/01.txt"), [0xff, 0xfe, 0x00]).unwrap();
        assert!(matches!(
            load_book(tmp.path()),
            Err(CorpusError::BadEncoding { page: 1 })
        ));
    }

    #[test]
    fn blank_page_text_is_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        write_book(tmp.path(), &[(1, "  \n ")]);
        assert!(matches!(
            load_book(tmp.path()),
            Err(CorpusError::EmptyPageText { page: 1 })
        ));
    }

    #[test]
    fn missing_directory_is_an_error() {
        let err = load_book(Path::new("/nonexistent/book")).unwrap_err();
        assert!(matches!(err, CorpusError::MissingDirectory(_)));
    }

    #[test]
    fn stray_files_are_ignored() {
        let tmp = tempfile::tempdir().unwrap();
        write_book(tmp.path(), &[(1, "A page.")]);
        fs::write(tmp.path().join("pages/README.md"), "notes").unwrap();
        fs::write(tmp.path().join("pages/100.txt"), "not a page").unwrap();
        let book = load_book(tmp.path()).unwrap();
        assert_eq!(book.pages.len(), 1);
    }
}
