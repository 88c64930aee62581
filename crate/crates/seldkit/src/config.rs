//! Pipeline configuration: a flat key=value text file whose defaults are
//! the processing constants of the supported setup. Every value is
//! validated against the owning module's invariants at load time and
//! unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::Path;

use crate::accddoa::DecodeConfig;
use crate::classes::class_id_by_name;
use crate::ensemble::EnsembleConfig;
use crate::error::{Error, Result};
use crate::features::{StftConfig, WpeConfig};
use crate::io::DistanceUnit;
use crate::metrics::MatchingConfig;

pub const ENV_PREFIX: &str = "SELDKIT_";

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub sample_rate: u32,
    pub stft: StftConfig,
    pub mel_bands: usize,
    pub mel_fmin: f64,
    pub mel_fmax: f64,
    pub wpe: WpeConfig,
    pub chunk_len_s: f64,
    pub chunk_hop_train_s: f64,
    pub chunk_hop_eval_s: f64,
    pub label_fps: u32,
    pub decode: DecodeConfig,
    pub ensemble: EnsembleConfig,
    pub metrics: MatchingConfig,
    pub distance_unit: DistanceUnit,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            sample_rate: 24000,
            stft: StftConfig::default(),
            mel_bands: 128,
            mel_fmin: 0.0,
            mel_fmax: 12000.0,
            wpe: WpeConfig::default(),
            chunk_len_s: 3.0,
            chunk_hop_train_s: 1.0,
            chunk_hop_eval_s: 3.0,
            label_fps: 10,
            decode: DecodeConfig::default(),
            ensemble: EnsembleConfig::default(),
            metrics: MatchingConfig::default(),
            distance_unit: DistanceUnit::Centimeters,
        }
    }
}

impl PipelineConfig {
    /// Parse key=value text over the defaults. Lines starting with `#`
    /// and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::ConfigValue {
                    key: format!("line {}", idx + 1),
                    reason: format!("expected key=value, got `{line}`"),
                });
            };
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Apply environment overrides: `SELDKIT_STFT_HOP=160` overrides the
    /// key `stft.hop`.
    pub fn apply_env<I>(&mut self, vars: I) -> Result<()>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        for (name, value) in vars {
            if let Some(rest) = name.strip_prefix(ENV_PREFIX) {
                let key = rest.to_ascii_lowercase().replace('_', ".");
                self.set(&key, &value)?;
            }
        }
        self.validate()
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |reason: &str| -> Error {
            Error::ConfigValue {
                key: key.to_string(),
                reason: format!("{reason}: `{value}`"),
            }
        };
        let parse_u32 = |v: &str| v.parse::<u32>().map_err(|_| bad("expected an integer"));
        let parse_usize = |v: &str| v.parse::<usize>().map_err(|_| bad("expected an integer"));
        let parse_f64 = |v: &str| v.parse::<f64>().map_err(|_| bad("expected a number"));

        match key {
            "sample_rate" => self.sample_rate = parse_u32(value)?,
            "stft.win" => self.stft.win_len = parse_usize(value)?,
            "stft.hop" => self.stft.hop = parse_usize(value)?,
            "mel.bands" => self.mel_bands = parse_usize(value)?,
            "mel.fmin" => self.mel_fmin = parse_f64(value)?,
            "mel.fmax" => self.mel_fmax = parse_f64(value)?,
            "wpe.taps" => self.wpe.taps = parse_usize(value)?,
            "wpe.delay" => self.wpe.delay = parse_usize(value)?,
            "wpe.iterations" => self.wpe.iterations = parse_usize(value)?,
            "wpe.epsilon" => self.wpe.epsilon = parse_f64(value)?,
            "chunk.len" => self.chunk_len_s = parse_f64(value)?,
            "chunk.hop.train" => self.chunk_hop_train_s = parse_f64(value)?,
            "chunk.hop.eval" => self.chunk_hop_eval_s = parse_f64(value)?,
            "label.fps" => self.label_fps = parse_u32(value)?,
            "decode.threshold" => self.decode.activity_threshold = parse_f64(value)?,
            "decode.merge.angle" => self.decode.merge_angle_deg = parse_f64(value)?,
            "ensemble.angle" => self.ensemble.angle_threshold_deg = parse_f64(value)?,
            "ensemble.min.votes" => self.ensemble.min_votes = parse_usize(value)?,
            "ensemble.exceptions" => {
                let mut classes = BTreeSet::new();
                for name in value.split(',').filter(|s| !s.trim().is_empty()) {
                    let id = class_id_by_name(name.trim())
                        .ok_or_else(|| bad(&format!("unknown class `{}`", name.trim())))?;
                    classes.insert(id);
                }
                self.ensemble.exception_classes = classes;
            }
            "metrics.angle" => self.metrics.angle_threshold_deg = parse_f64(value)?,
            "metrics.rel.dist" => self.metrics.rel_dist_threshold = parse_f64(value)?,
            "distance_unit" => {
                self.distance_unit =
                    DistanceUnit::parse(value).ok_or_else(|| bad("expected `cm` or `m`"))?;
            }
            other => return Err(Error::UnknownConfigKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let err = |key: &str, reason: String| -> Result<()> {
            Err(Error::ConfigValue {
                key: key.into(),
                reason,
            })
        };
        if self.sample_rate == 0 {
            return err("sample_rate", "must be positive".into());
        }
        if self.stft.win_len < 2 || self.stft.win_len % 2 != 0 {
            return err("stft.win", format!("{} is not an even window", self.stft.win_len));
        }
        if self.stft.hop == 0 || self.stft.hop > self.stft.win_len / 2 {
            return err(
                "stft.hop",
                format!("{} must be in 1..=win/2", self.stft.hop),
            );
        }
        let nyquist = self.sample_rate as f64 / 2.0;
        if self.mel_bands == 0 {
            return err("mel.bands", "must be >= 1".into());
        }
        if !(0.0 <= self.mel_fmin && self.mel_fmin < self.mel_fmax && self.mel_fmax <= nyquist) {
            return err(
                "mel.fmax",
                format!("band edges [{}, {}] invalid for nyquist {nyquist}", self.mel_fmin, self.mel_fmax),
            );
        }
        self.wpe.validate()?;
        if !(self.chunk_len_s > 0.0) || !(self.chunk_hop_train_s > 0.0) || !(self.chunk_hop_eval_s > 0.0)
        {
            return err("chunk.len", "chunk lengths and hops must be positive".into());
        }
        let frames = self.label_fps as f64 * self.chunk_len_s;
        if (frames - frames.round()).abs() > 1e-9 {
            return err(
                "chunk.len",
                format!("label_fps * len = {frames} is not an integer frame count"),
            );
        }
        self.decode.validate()?;
        self.ensemble.validate()?;
        self.metrics.validate()?;
        Ok(())
    }
}
