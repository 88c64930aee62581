//! Non-neural processing pipeline for audio-visual sound event
//! localization and detection with source distance estimation:
//! first-order-ambisonics feature extraction (log-mels, intensity
//! vectors, direct/reverberant split), spatial audio-visual augmentation,
//! equirectangular/cubemap projection, activity-coupled label codecs,
//! prediction ensembling, and the location-dependent evaluation metrics.
//!
//! Data-parallel inner loops (per-frequency dereverberation solves,
//! per-row image resampling) run on rayon when the default `parallel`
//! feature is enabled and fall back to equivalent sequential code without
//! it; outputs are bit-identical either way.

pub mod accddoa;
pub mod augment;
pub mod classes;
pub mod clip;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod features;
pub mod geom;
pub mod io;
pub mod metrics;
pub mod projection;
pub mod synth;
pub mod tensor;

pub use clip::{ChannelOrder, FoaClip};
pub use config::PipelineConfig;
pub use error::{Error, Result};
