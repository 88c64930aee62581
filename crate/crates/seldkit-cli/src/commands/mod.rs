pub mod augment;
pub mod codec;
pub mod ensemble;
pub mod eval;
pub mod features;
pub mod project;
pub mod synth;

use std::path::Path;

use anyhow::{bail, Result};
use image::DynamicImage;

/// Frames come in two shapes: RGB video frames and single-channel depth
/// maps. Both ride the same geometric code paths.
pub enum Frame {
    Rgb(image::RgbImage),
    Gray(image::GrayImage),
}

impl Frame {
    pub fn open(path: &Path) -> Result<Frame> {
        let img = image::open(path)?;
        Ok(match img {
            DynamicImage::ImageLuma8(g) => Frame::Gray(g),
            other => Frame::Rgb(other.to_rgb8()),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        match self {
            Frame::Rgb(img) => img.save(path)?,
            Frame::Gray(img) => img.save(path)?,
        }
        Ok(())
    }
}

/// Output path next to `out_dir` with a suffix spliced in before the
/// extension: `clip.wav` + `_acs3` -> `clip_acs3.wav`.
pub fn suffixed_name(input: &Path, suffix: &str, new_ext: Option<&str>) -> Result<String> {
    let Some(stem) = input.file_stem().and_then(|s| s.to_str()) else {
        bail!("cannot derive a file name from {}", input.display());
    };
    let ext = match new_ext {
        Some(e) => e.to_string(),
        None => input
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("out")
            .to_string(),
    };
    Ok(format!("{stem}{suffix}.{ext}"))
}
