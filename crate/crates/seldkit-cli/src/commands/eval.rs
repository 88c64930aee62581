use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use seldkit::classes::class_name;
use seldkit::io::{group_by_frame, read_predictions_csv};
use seldkit::metrics::evaluate;
use seldkit::PipelineConfig;

#[derive(Args)]
pub struct EvalArgs {
    /// Prediction CSV (frame,class,az,el,dist). The 6-column metadata
    /// schema is accepted too.
    #[arg(long)]
    pub pred: PathBuf,

    /// Reference CSV, same accepted schemas.
    #[arg(long = "ref", value_name = "REF")]
    pub reference: PathBuf,

    /// Optional machine-readable report (key=value lines).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

pub fn run(config: &PipelineConfig, args: EvalArgs) -> Result<()> {
    let preds = read_predictions_csv(&args.pred, config.distance_unit)?;
    let refs = read_predictions_csv(&args.reference, config.distance_unit)?;
    let num_frames = preds
        .max_frame()
        .into_iter()
        .chain(refs.max_frame())
        .max()
        .map_or(0, |m| m + 1);

    let report = evaluate(
        &group_by_frame(&preds, Some(num_frames)),
        &group_by_frame(&refs, Some(num_frames)),
        &config.metrics,
    )?;

    println!(
        "F<={:.0}deg/{:.0}   DOAE      RDE",
        config.metrics.angle_threshold_deg, config.metrics.rel_dist_threshold
    );
    println!(
        "{:>9.1}%   {:>5.1}deg  {:>5.1}%",
        report.f1 * 100.0,
        report.doae_deg,
        report.rde * 100.0
    );

    if let Some(path) = &args.report {
        let mut text = String::new();
        writeln!(text, "f1={:.6}", report.f1)?;
        writeln!(text, "doae_deg={:.6}", report.doae_deg)?;
        writeln!(text, "rde={:.6}", report.rde)?;
        for c in &report.per_class {
            if c.num_refs == 0 && c.fp == 0 {
                continue;
            }
            let name = class_name(c.class_id).unwrap_or("unknown");
            writeln!(text, "class.{}.name={name}", c.class_id)?;
            writeln!(text, "class.{}.tp={}", c.class_id, c.tp)?;
            writeln!(text, "class.{}.fp={}", c.class_id, c.fp)?;
            writeln!(text, "class.{}.fn={}", c.class_id, c.fn_count)?;
            writeln!(text, "class.{}.f1={:.6}", c.class_id, c.f1())?;
            if let Some(doae) = c.doae_deg {
                writeln!(text, "class.{}.doae_deg={doae:.6}", c.class_id)?;
            }
            if let Some(rde) = c.rde {
                writeln!(text, "class.{}.rde={rde:.6}", c.class_id)?;
            }
        }
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        println!("report: {}", path.display());
    }
    Ok(())
}
