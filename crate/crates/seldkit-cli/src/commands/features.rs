use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use seldkit::features::{build_feature_stack, MelFilterbank};
use seldkit::io::{chunk_indices, read_foa_wav, ChunkSpec};
use seldkit::PipelineConfig;

#[derive(Args)]
pub struct FeaturesArgs {
    /// 4-channel FOA WAV input.
    #[arg(long)]
    pub input: PathBuf,

    /// Directory for the per-chunk tensor files.
    #[arg(long)]
    pub out_dir: PathBuf,

    /// Append the direct/reverberant log-mels (9-channel stack).
    #[arg(long)]
    pub dr: bool,

    /// Chunk hop in seconds; defaults to the evaluation hop (no overlap).
    #[arg(long)]
    pub hop_s: Option<f64>,
}

pub fn run(config: &PipelineConfig, args: FeaturesArgs) -> Result<()> {
    let clip = read_foa_wav(&args.input, config.sample_rate)?;
    let hop = args.hop_s.unwrap_or(config.chunk_hop_eval_s);
    let spec = ChunkSpec::new(config.chunk_len_s, hop, config.label_fps)?;
    let chunks = chunk_indices(clip.duration_s(), &spec)?;

    let fb = MelFilterbank::new(
        config.mel_bands,
        config.stft.win_len,
        config.sample_rate,
        config.mel_fmin,
        config.mel_fmax,
    )?;

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let stem = args
        .input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("features");

    for (idx, (start, end)) in chunks.iter().enumerate() {
        let chunk = clip.slice_seconds(*start, *end)?;
        let stack = build_feature_stack(&chunk, args.dr, &config.stft, &fb, &config.wpe)
            .with_context(|| format!("chunk {idx} [{start}, {end})"))?;
        let path = args.out_dir.join(format!("{stem}_chunk{idx:04}.aft"));
        stack.save(&path)?;
        println!(
            "{}: {}x{}x{}",
            path.display(),
            stack.num_channels(),
            stack.num_frames,
            stack.num_bands
        );
    }
    Ok(())
}
