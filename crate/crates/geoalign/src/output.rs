//! Output layout and atomic file writing.
//!
//! Generated artifacts land under
//! `out/<book_id>/<culture>/<method>/page_NN.png` with a
//! `page_NN.manifest.json` sibling. Files are written to a temporary name
//! in the target directory and renamed into place, so readers never see a
//! half-written image or manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use image::RgbImage;
use sha2::{Digest, Sha256};

use crate::generation::Method;

/// Deterministic PNG encoding of an image.
pub fn encode_png(image: &RgbImage) -> std::io::Result<Vec<u8>> {
    let mut bytes = Vec::new();
    image
        .write_to(
            &mut std::io::Cursor::new(&mut bytes),
            image::ImageFormat::Png,
        )
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(bytes)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes via a temp file in the target directory plus rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `<root>/<book_id>/<culture>/<method>/` for one translation run.
pub fn run_dir(root: &Path, book_id: &str, culture: &str, method: Method) -> PathBuf {
    root.join(book_id).join(culture).join(method.dir_name())
}

pub fn page_image_path(run_dir: &Path, page_index: u32) -> PathBuf {
    run_dir.join(format!("page_{page_index:02}.png"))
}

/// `page_NN.manifest.json` next to `page_NN.png`.
pub fn manifest_path_for(image_path: &Path) -> PathBuf {
    let stem = image_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("image");
    image_path.with_file_name(format!("{stem}.manifest.json"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_encoding_is_deterministic() {
        let mut img = RgbImage::new(9, 5);
        for (x, y, p) in img.enumerate_pixels_mut() {
            *p = image::Rgb([x as u8 * 7, y as u8 * 11, 3]);
        }
        assert_eq!(encode_png(&img).unwrap(), encode_png(&img).unwrap());
    }

    #[test]
    fn atomic_write_creates_parents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b/c.txt");
        write_atomic(&path, b"payload").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"payload");
    }

    #[test]
    fn layout_paths() {
        let run = run_dir(Path::new("out"), "mango-tree", "japanese", Method::M2);
        assert_eq!(run, Path::new("out/mango-tree/japanese/m2"));
        let img = page_image_path(&run, 3);
        assert_eq!(img, Path::new("out/mango-tree/japanese/m2/page_03.png"));
        assert_eq!(
            manifest_path_for(&img),
            Path::new("out/mango-tree/japanese/m2/page_03.manifest.json")
        );
    }
}
