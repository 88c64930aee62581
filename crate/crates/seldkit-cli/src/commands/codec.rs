use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;

use seldkit::accddoa::{decode, encode, FrameVector, FRAME_VECTOR_LEN};
use seldkit::io::{read_metadata_csv, write_predictions_csv};
use seldkit::tensor::{read_tensor, write_tensor};
use seldkit::PipelineConfig;

#[derive(Args)]
pub struct EncodeArgs {
    /// Event metadata CSV.
    #[arg(long)]
    pub csv: PathBuf,

    /// Output tensor path.
    #[arg(long)]
    pub out: PathBuf,

    /// Label frames to encode; defaults to the last occupied frame + 1.
    #[arg(long)]
    pub num_frames: Option<usize>,
}

pub fn run_encode(config: &PipelineConfig, args: EncodeArgs) -> Result<()> {
    let events = read_metadata_csv(&args.csv, config.distance_unit)?;
    let num_frames = args
        .num_frames
        .unwrap_or_else(|| events.max_frame().map_or(0, |m| m + 1));
    if num_frames == 0 {
        bail!("no events and no --num-frames; nothing to encode");
    }
    let frames = encode(&events, num_frames)?;

    // channel-major layout: value index c, frame t, single band
    let mut data = vec![0.0f32; FRAME_VECTOR_LEN * num_frames];
    for (t, frame) in frames.iter().enumerate() {
        for (c, &v) in frame.values.iter().enumerate() {
            data[c * num_frames + t] = v as f32;
        }
    }
    write_tensor(&args.out, FRAME_VECTOR_LEN, num_frames, 1, &data)?;
    println!("{}: {}x{}x1", args.out.display(), FRAME_VECTOR_LEN, num_frames);
    Ok(())
}

#[derive(Args)]
pub struct DecodeArgs {
    /// Frame-vector tensor (156 x frames x 1).
    #[arg(long)]
    pub input: PathBuf,

    /// Output prediction CSV.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_decode(config: &PipelineConfig, args: DecodeArgs) -> Result<()> {
    let (channels, num_frames, bands, data) = read_tensor(&args.input)?;
    if channels != FRAME_VECTOR_LEN || bands != 1 {
        bail!(
            "{}: expected a {FRAME_VECTOR_LEN}x T x1 frame-vector tensor, found {channels}x{num_frames}x{bands}",
            args.input.display()
        );
    }
    let mut frames = Vec::with_capacity(num_frames);
    for t in 0..num_frames {
        let mut v = FrameVector::default();
        for c in 0..FRAME_VECTOR_LEN {
            v.values[c] = data[c * num_frames + t] as f64;
        }
        frames.push(v);
    }
    let decoded = decode(&frames, &config.decode);
    write_predictions_csv(&args.out, &decoded)?;
    let total: usize = decoded.iter().map(|f| f.len()).sum();
    println!("{}: {total} events over {num_frames} frames", args.out.display());
    Ok(())
}
