use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;

use seldkit::augment::{acs_audio, acs_labels, acs_table, avcs_frame};
use seldkit::io::{read_foa_wav, read_metadata_csv, write_foa_wav, write_metadata_csv};
use seldkit::PipelineConfig;

use super::{suffixed_name, Frame};

#[derive(Args)]
pub struct AugmentArgs {
    /// Which of the 8 channel-swap transforms to apply.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..8))]
    pub transform_id: u8,

    /// FOA WAV to transform.
    #[arg(long)]
    pub wav: Option<PathBuf>,

    /// Event metadata CSV to remap consistently.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Directory of equirectangular frames to transform.
    #[arg(long)]
    pub frames: Option<PathBuf>,

    /// Output directory.
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(config: &PipelineConfig, args: AugmentArgs) -> Result<()> {
    if args.wav.is_none() && args.csv.is_none() && args.frames.is_none() {
        bail!("nothing to augment: pass --wav, --csv and/or --frames");
    }
    let transform = acs_table()[args.transform_id as usize];
    let suffix = format!("_acs{}", transform.id);
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    if let Some(wav) = &args.wav {
        let clip = read_foa_wav(wav, config.sample_rate)?;
        let swapped = acs_audio(&clip, &transform);
        let out = args.out_dir.join(suffixed_name(wav, &suffix, None)?);
        write_foa_wav(&out, &swapped)?;
        println!("{}", out.display());
    }

    if let Some(csv) = &args.csv {
        let events = read_metadata_csv(csv, config.distance_unit)?;
        let mapped = acs_labels(&events, &transform);
        let out = args.out_dir.join(suffixed_name(csv, &suffix, None)?);
        write_metadata_csv(&out, &mapped, config.distance_unit)?;
        println!("{}", out.display());
    }

    if let Some(frames) = &args.frames {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(frames)
            .with_context(|| format!("reading {}", frames.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        for path in paths {
            let out = args.out_dir.join(suffixed_name(&path, &suffix, None)?);
            match Frame::open(&path)? {
                Frame::Rgb(img) => Frame::Rgb(avcs_frame(&img, &transform)?).save(&out)?,
                Frame::Gray(img) => Frame::Gray(avcs_frame(&img, &transform)?).save(&out)?,
            }
            println!("{}", out.display());
        }
    }
    Ok(())
}
