use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};

use seldkit::classes::class_id_by_name;
use seldkit::ensemble::{fuse_models, fuse_temporal, ChunkPrediction};
use seldkit::io::{group_by_frame, read_predictions_csv, write_predictions_csv};
use seldkit::PipelineConfig;

#[derive(Subcommand)]
pub enum EnsembleCommand {
    /// Fuse sliding-window predictions of one sequence. Positional CSVs
    /// are the per-window predictions in window order; window k starts at
    /// k * hop seconds and frames inside each CSV are window-local.
    Temporal(TemporalArgs),
    /// Fuse aligned per-frame predictions of multiple models.
    Models(ModelsArgs),
}

#[derive(Args)]
pub struct TemporalArgs {
    /// Chunk length in seconds.
    #[arg(long, default_value_t = 3.0)]
    pub len: f64,

    /// Hop between window starts in seconds.
    #[arg(long, default_value_t = 1.0)]
    pub hop: f64,

    /// Fused output CSV.
    #[arg(long)]
    pub out: PathBuf,

    /// Per-window prediction CSVs in start order.
    #[arg(required = true)]
    pub windows: Vec<PathBuf>,
}

#[derive(Args)]
pub struct ModelsArgs {
    /// Classes accepted on a single model's vote (comma-separated names).
    #[arg(long, value_delimiter = ',')]
    pub exceptions: Vec<String>,

    /// Fused output CSV.
    #[arg(long)]
    pub out: PathBuf,

    /// Per-model prediction CSVs with absolute frame indices.
    #[arg(required = true)]
    pub models: Vec<PathBuf>,
}

pub fn run(config: &PipelineConfig, cmd: EnsembleCommand) -> Result<()> {
    match cmd {
        EnsembleCommand::Temporal(args) => run_temporal(config, args),
        EnsembleCommand::Models(args) => run_models(config, args),
    }
}

fn run_temporal(config: &PipelineConfig, args: TemporalArgs) -> Result<()> {
    if args.len <= 0.0 || args.hop <= 0.0 {
        bail!("--len and --hop must be positive");
    }
    let frames_per_chunk = (args.len * config.label_fps as f64).round() as usize;
    let hop_frames = (args.hop * config.label_fps as f64).round() as usize;

    let mut chunks = Vec::with_capacity(args.windows.len());
    for (k, path) in args.windows.iter().enumerate() {
        let events = read_predictions_csv(path, config.distance_unit)?;
        if let Some(max) = events.max_frame() {
            if max >= frames_per_chunk {
                bail!(
                    "{}: frame {max} outside the {frames_per_chunk}-frame window",
                    path.display()
                );
            }
        }
        chunks.push(ChunkPrediction {
            start_frame: k * hop_frames,
            frames: group_by_frame(&events, Some(frames_per_chunk)),
        });
    }
    let fused = fuse_temporal(&chunks, &config.ensemble)?;
    write_predictions_csv(&args.out, &fused)?;
    println!("{}", args.out.display());
    Ok(())
}

fn run_models(config: &PipelineConfig, args: ModelsArgs) -> Result<()> {
    let mut cfg = config.ensemble.clone();
    if !args.exceptions.is_empty() {
        let mut classes = BTreeSet::new();
        for name in &args.exceptions {
            match class_id_by_name(name) {
                Some(id) => {
                    classes.insert(id);
                }
                None => bail!("unknown exception class `{name}`"),
            }
        }
        cfg.exception_classes = classes;
    }

    let lists: Vec<_> = args
        .models
        .iter()
        .map(|p| read_predictions_csv(p, config.distance_unit))
        .collect::<seldkit::Result<Vec<_>>>()?;
    let num_frames = lists
        .iter()
        .map(|l| l.max_frame().map_or(0, |m| m + 1))
        .max()
        .unwrap_or(0);
    let models: Vec<_> = lists
        .iter()
        .map(|l| group_by_frame(l, Some(num_frames)))
        .collect();

    let fused = fuse_models(&models, &cfg)?;
    write_predictions_csv(&args.out, &fused)?;
    println!("{}", args.out.display());
    Ok(())
}
