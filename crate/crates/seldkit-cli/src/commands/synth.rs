use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};

use seldkit::io::{write_foa_wav, write_metadata_csv, Event, EventList};
use seldkit::synth::{marker_image, plane_wave_foa, ReverbSpec, SignalKind, SourceSpec};
use seldkit::PipelineConfig;

#[derive(Subcommand)]
pub enum SynthCommand {
    /// Synthesize a FOA plane wave, optionally with a reverb tail.
    Wave(WaveArgs),
    /// Render a black frame with a single white marker pixel.
    Marker(MarkerArgs),
}

#[derive(Args)]
pub struct WaveArgs {
    #[arg(long, default_value_t = 0.0)]
    pub az: f64,

    #[arg(long, default_value_t = 0.0)]
    pub el: f64,

    /// Source distance in meters (metadata only).
    #[arg(long, default_value_t = 1.0)]
    pub dist: f64,

    /// Source class id for the metadata row.
    #[arg(long, default_value_t = 0)]
    pub class: usize,

    /// Excitation: `noise`, `tone:<hz>` or `impulse`.
    #[arg(long, default_value = "noise")]
    pub signal: String,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 3.0)]
    pub duration: f64,

    /// Add an exponential tail with this T60 (seconds).
    #[arg(long)]
    pub t60: Option<f64>,

    /// Direct-to-reverberant ratio of the added tail (dB).
    #[arg(long, default_value_t = 0.0)]
    pub drr: f64,

    #[arg(long, default_value_t = 1)]
    pub reverb_seed: u64,

    /// Output WAV path.
    #[arg(long)]
    pub out: PathBuf,

    /// Optional matching metadata CSV with one row per label frame.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct MarkerArgs {
    #[arg(long, default_value_t = 448)]
    pub width: u32,

    #[arg(long, default_value_t = 224)]
    pub height: u32,

    #[arg(long, default_value_t = 0.0)]
    pub az: f64,

    #[arg(long, default_value_t = 0.0)]
    pub el: f64,

    /// Output image path (PNG).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(config: &PipelineConfig, cmd: SynthCommand) -> Result<()> {
    match cmd {
        SynthCommand::Wave(args) => run_wave(config, args),
        SynthCommand::Marker(args) => run_marker(args),
    }
}

fn parse_signal(s: &str, seed: u64) -> Result<SignalKind> {
    if s == "noise" {
        return Ok(SignalKind::WhiteNoise { seed });
    }
    if s == "impulse" {
        return Ok(SignalKind::Impulse);
    }
    if let Some(freq) = s.strip_prefix("tone:") {
        return Ok(SignalKind::Tone {
            freq_hz: freq.parse()?,
        });
    }
    bail!("unknown signal `{s}`; expected noise, tone:<hz> or impulse");
}

fn run_wave(config: &PipelineConfig, args: WaveArgs) -> Result<()> {
    let spec = SourceSpec {
        azimuth_deg: args.az,
        elevation_deg: args.el,
        distance_m: args.dist,
        signal: parse_signal(&args.signal, args.seed)?,
        reverb: args
            .t60
            .map(|t60| ReverbSpec::new(t60, args.drr, args.reverb_seed)),
    };
    let clip = plane_wave_foa(&spec, args.duration, config.sample_rate);
    write_foa_wav(&args.out, &clip)?;
    println!("{}", args.out.display());

    if let Some(csv) = &args.csv {
        let frames = (args.duration * config.label_fps as f64).round() as usize;
        let events = (0..frames)
            .map(|frame| Event {
                frame,
                class_id: args.class,
                source_id: 0,
                azimuth_deg: args.az,
                elevation_deg: args.el,
                distance_m: args.dist,
            })
            .collect();
        write_metadata_csv(csv, &EventList::new(events), config.distance_unit)?;
        println!("{}", csv.display());
    }
    Ok(())
}

fn run_marker(args: MarkerArgs) -> Result<()> {
    let img = marker_image(args.width, args.height, args.az, args.el)?;
    img.save(&args.out)?;
    println!("{}", args.out.display());
    Ok(())
}
