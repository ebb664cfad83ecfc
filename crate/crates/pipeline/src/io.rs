use std::fs;
use std::io::BufWriter;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder};
use qagait_core::silcore::binarize;
use qagait_core::Silhouette;

use crate::error::{PipelineError, Result};

pub const THRESHOLD: u8 = 128;

pub fn is_image(name: &str) -> bool {
    let lower = name.to_ascii_lowercase();
    lower.ends_with(".png") || lower.ends_with(".pgm")
}

/// Output name for a frame: same stem, `.pgm` extension.
pub fn pgm_name(frame_file: &str) -> String {
    let stem = frame_file.rsplit_once('.').map_or(frame_file, |(s, _)| s);
    format!("{stem}.pgm")
}

/// Decodes a PNG or PGM as 8-bit gray and binarizes at 128.
pub fn load_frame(path: &Path) -> Result<Silhouette> {
    let img = image::open(path).map_err(|e| PipelineError::Image {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    let gray = img.to_luma8();
    let (w, h) = gray.dimensions();
    binarize(gray.as_raw(), h as usize, w as usize, THRESHOLD).map_err(|e| PipelineError::Image {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// Writes a binary (P5) PGM with values 0 and 255, creating parent
/// directories.
pub fn write_pgm(path: &Path, sil: &Silhouette) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| PipelineError::io(parent, e))?;
    }
    let file = fs::File::create(path).map_err(|e| PipelineError::io(path, e))?;
    let encoder = PnmEncoder::new(BufWriter::new(file)).with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary));
    encoder
        .write_image(&sil.to_gray(), sil.width() as u32, sil.height() as u32, ExtendedColorType::L8)
        .map_err(|e| PipelineError::Image {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })
}
