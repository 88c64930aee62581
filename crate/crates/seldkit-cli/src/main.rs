use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use seldkit::PipelineConfig;

mod commands;

#[derive(Parser)]
#[command(
    name = "seldkit",
    about = "FOA feature extraction, spatial augmentation, cubemap projection, \
             label codecs, ensembling and evaluation for sound event \
             localization and detection with distance estimation",
    version
)]
struct Cli {
    /// Path to a key=value config file; defaults cover the standard setup.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for data-parallel stages (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chunk a FOA WAV and write one feature tensor per chunk.
    Features(commands::features::FeaturesArgs),
    /// Apply one channel-swap transform jointly to WAV, metadata CSV and frames.
    Augment(commands::augment::AugmentArgs),
    /// Convert equirectangular frames to 4-face horizontal cubemap strips.
    Project(commands::project::ProjectArgs),
    /// Encode a metadata CSV into a frame-vector tensor.
    EncodeLabels(commands::codec::EncodeArgs),
    /// Decode a frame-vector tensor into a prediction CSV.
    Decode(commands::codec::DecodeArgs),
    /// Fuse predictions across windows or models.
    #[command(subcommand)]
    Ensemble(commands::ensemble::EnsembleCommand),
    /// Score predictions against references.
    Eval(commands::eval::EvalArgs),
    /// Generate synthetic fixtures.
    #[command(subcommand)]
    Synth(commands::synth::SynthCommand),
}

fn load_config(path: Option<&PathBuf>) -> Result<PipelineConfig> {
    let mut cfg = match path {
        Some(p) => PipelineConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => PipelineConfig::default(),
    };
    cfg.apply_env(std::env::vars())?;
    Ok(cfg)
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = load_config(cli.config.as_ref())?;
    if cli.jobs > 0 {
        // ignored when the library was built without the parallel feature
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match cli.command {
        Command::Features(args) => commands::features::run(&config, args),
        Command::Augment(args) => commands::augment::run(&config, args),
        Command::Project(args) => commands::project::run(&config, args),
        Command::EncodeLabels(args) => commands::codec::run_encode(&config, args),
        Command::Decode(args) => commands::codec::run_decode(&config, args),
        Command::Ensemble(cmd) => commands::ensemble::run(&config, cmd),
        Command::Eval(args) => commands::eval::run(&config, args),
        Command::Synth(cmd) => commands::synth::run(&config, cmd),
    }
}
