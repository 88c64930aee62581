use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use seldkit::projection::equirect_to_cubemap;
use seldkit::PipelineConfig;

use super::{suffixed_name, Frame};

#[derive(Args)]
pub struct ProjectArgs {
    /// An equirectangular frame or a directory of frames.
    #[arg(long)]
    pub input: PathBuf,

    /// Output directory.
    #[arg(long)]
    pub out_dir: PathBuf,

    /// Cubemap face edge length in pixels.
    #[arg(long, default_value_t = 224)]
    pub face_size: u32,
}

pub fn run(_config: &PipelineConfig, args: ProjectArgs) -> Result<()> {
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    let mut paths: Vec<PathBuf> = if args.input.is_dir() {
        let mut v: Vec<PathBuf> = std::fs::read_dir(&args.input)
            .with_context(|| format!("reading {}", args.input.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        v.sort();
        v
    } else {
        vec![args.input.clone()]
    };
    if paths.is_empty() {
        anyhow::bail!("no frames under {}", args.input.display());
    }
    paths.retain(|p| p.extension().is_some());

    for path in paths {
        let out = args.out_dir.join(suffixed_name(&path, "_cube", None)?);
        match Frame::open(&path)? {
            Frame::Rgb(img) => {
                Frame::Rgb(equirect_to_cubemap(&img, args.face_size)?).save(&out)?
            }
            Frame::Gray(img) => {
                Frame::Gray(equirect_to_cubemap(&img, args.face_size)?).save(&out)?
            }
        }
        println!("{}", out.display());
    }
    Ok(())
}
