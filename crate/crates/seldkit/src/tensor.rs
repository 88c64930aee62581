//! Flat binary tensor files.
//!
//! Layout: 16-byte header (4-byte magic, then u32 LE channels, frames,
//! bands) followed by `channels * frames * bands` little-endian f32
//! values in channel-major order. Feature stacks and ACCDDOA frame-vector
//! sequences share the format.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{FeatureStack, StackKind};

pub const TENSOR_MAGIC: [u8; 4] = *b"AFT1";

pub fn write_tensor(
    path: &Path,
    channels: usize,
    frames: usize,
    bands: usize,
    data: &[f32],
) -> Result<()> {
    if data.len() != channels * frames * bands {
        return Err(Error::Shape(format!(
            "tensor data has {} values, header says {}x{}x{}",
            data.len(),
            channels,
            frames,
            bands
        )));
    }
    let mut buf = Vec::with_capacity(16 + data.len() * 4);
    buf.extend_from_slice(&TENSOR_MAGIC);
    buf.extend_from_slice(&(channels as u32).to_le_bytes());
    buf.extend_from_slice(&(frames as u32).to_le_bytes());
    buf.extend_from_slice(&(bands as u32).to_le_bytes());
    for v in data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&buf).map_err(|e| Error::io(path, e))
}

pub fn read_tensor(path: &Path) -> Result<(usize, usize, usize, Vec<f32>)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() < 16 || bytes[..4] != TENSOR_MAGIC {
        return Err(Error::Tensor {
            path: path.to_path_buf(),
            reason: "missing or wrong magic".into(),
        });
    }
    let dim = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let (channels, frames, bands) = (dim(4), dim(8), dim(12));
    let expected = 16 + channels * frames * bands * 4;
    if bytes.len() != expected {
        return Err(Error::Tensor {
            path: path.to_path_buf(),
            reason: format!("expected {expected} bytes, found {}", bytes.len()),
        });
    }
    let data = bytes[16..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((channels, frames, bands, data))
}

impl FeatureStack {
    pub fn save(&self, path: &Path) -> Result<()> {
        write_tensor(
            path,
            self.num_channels(),
            self.num_frames,
            self.num_bands,
            &self.to_f32(),
        )
    }

    pub fn load(path: &Path) -> Result<FeatureStack> {
        let (channels, frames, bands, data) = read_tensor(path)?;
        let kind = match channels {
            7 => StackKind::Base7,
            9 => StackKind::WithDr9,
            other => {
                return Err(Error::Tensor {
                    path: path.to_path_buf(),
                    reason: format!("{other} channels is not a known feature stack layout"),
                })
            }
        };
        Ok(FeatureStack {
            kind,
            num_frames: frames,
            num_bands: bands,
            data: data.into_iter().map(f64::from).collect(),
        })
    }
}
