//! Assembly of the audio input feature stack.

use crate::clip::FoaClip;
use crate::error::{Error, Result};
use crate::features::intensity::intensity_vectors;
use crate::features::mel::{logmel, MelFilterbank};
use crate::features::stft::{stft, stft_channel, StftConfig};
use crate::features::wpe::{wpe_direct, WpeConfig};

/// Which stack layout a tensor holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackKind {
    /// log-mels of W, Y, Z, X plus the three intensity components.
    Base7,
    /// Base7 plus log-mels of the WPE direct and reverberant omni signals.
    WithDr9,
}

impl StackKind {
    pub fn num_channels(&self) -> usize {
        match self {
            StackKind::Base7 => 7,
            StackKind::WithDr9 => 9,
        }
    }
}

/// Channel-major real tensor `[channels x frames x bands]` holding the
/// feature stack. Channel layout is fixed:
/// `[logmel W, logmel Y, logmel Z, logmel X, IVx, IVy, IVz]`
/// optionally followed by `[logmel direct, logmel reverb]`.
#[derive(Debug, Clone)]
pub struct FeatureStack {
    pub kind: StackKind,
    pub num_frames: usize,
    pub num_bands: usize,
    pub data: Vec<f64>,
}

impl FeatureStack {
    pub fn num_channels(&self) -> usize {
        self.kind.num_channels()
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let plane = self.num_frames * self.num_bands;
        &self.data[c * plane..(c + 1) * plane]
    }

    #[inline]
    pub fn at(&self, c: usize, t: usize, b: usize) -> f64 {
        self.data[(c * self.num_frames + t) * self.num_bands + b]
    }

    pub fn to_f32(&self) -> Vec<f32> {
        self.data.iter().map(|&v| v as f32).collect()
    }
}

/// Compute the full feature stack for one clip.
pub fn build_feature_stack(
    clip: &FoaClip,
    with_dr: bool,
    stft_cfg: &StftConfig,
    fb: &MelFilterbank,
    wpe_cfg: &WpeConfig,
) -> Result<FeatureStack> {
    let st = stft(clip, stft_cfg)?;
    let frames = st.num_frames();
    let bands = fb.num_bands;
    let plane = frames * bands;
    let kind = if with_dr {
        StackKind::WithDr9
    } else {
        StackKind::Base7
    };

    let mut data = vec![0.0f64; kind.num_channels() * plane];

    // log-mels of the four FOA channels in ACN order
    for (c, spec) in st.channels.iter().enumerate() {
        let lm = logmel(spec, fb)?;
        copy_frame_major(&lm, &mut data[c * plane..(c + 1) * plane]);
    }

    // intensity vectors are already component-major [3 x frames x bands]
    let iv = intensity_vectors(&st, fb)?;
    data[4 * plane..7 * plane].copy_from_slice(&iv);

    if with_dr {
        let (direct, reverb) = wpe_direct(clip.w(), stft_cfg, wpe_cfg)?;
        let lm_direct = logmel(&stft_channel(&direct, stft_cfg)?, fb)?;
        let lm_reverb = logmel(&stft_channel(&reverb, stft_cfg)?, fb)?;
        if lm_direct.len() != plane {
            return Err(Error::Shape(
                "direct-path spectrogram frame count diverged from the stack".into(),
            ));
        }
        copy_frame_major(&lm_direct, &mut data[7 * plane..8 * plane]);
        copy_frame_major(&lm_reverb, &mut data[8 * plane..9 * plane]);
    }

    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "non-finite value in feature stack".into(),
        ));
    }

    Ok(FeatureStack {
        kind,
        num_frames: frames,
        num_bands: bands,
        data,
    })
}

fn copy_frame_major(src: &[f64], dst: &mut [f64]) {
    dst.copy_from_slice(src);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{plane_wave_foa, SignalKind, SourceSpec};

    fn fixture_clip(seconds: f64) -> FoaClip {
        plane_wave_foa(
            &SourceSpec {
                azimuth_deg: 40.0,
                elevation_deg: -15.0,
                distance_m: 2.0,
                signal: SignalKind::WhiteNoise { seed: 99 },
                reverb: None,
            },
            seconds,
            24000,
        )
    }

    #[test]
    fn base_stack_is_7x480x128() {
        let clip = fixture_clip(3.0);
        let fb = MelFilterbank::new(128, 512, 24000, 0.0, 12000.0).unwrap();
        let stack = build_feature_stack(
            &clip,
            false,
            &StftConfig::default(),
            &fb,
            &WpeConfig::default(),
        )
        .unwrap();
        assert_eq!(stack.num_channels(), 7);
        assert_eq!(stack.num_frames, 480);
        assert_eq!(stack.num_bands, 128);
        assert_eq!(stack.data.len(), 7 * 480 * 128);
    }

    #[test]
    fn dr_stack_is_9x480x128() {
        let clip = fixture_clip(3.0);
        let fb = MelFilterbank::new(128, 512, 24000, 0.0, 12000.0).unwrap();
        let wpe = WpeConfig {
            iterations: 1,
            taps: 10,
            ..WpeConfig::default()
        };
        let stack =
            build_feature_stack(&clip, true, &StftConfig::default(), &fb, &wpe).unwrap();
        assert_eq!(stack.num_channels(), 9);
        assert_eq!(stack.num_frames, 480);
        assert_eq!(stack.num_bands, 128);
    }

    #[test]
    fn zero_clip_floors_logmels_and_zeroes_ivs() {
        let clip = FoaClip::from_acn_channels(
            [
                vec![0.0; 24000],
                vec![0.0; 24000],
                vec![0.0; 24000],
                vec![0.0; 24000],
            ],
            24000,
        )
        .unwrap();
        let fb = MelFilterbank::new(128, 512, 24000, 0.0, 12000.0).unwrap();
        let stack = build_feature_stack(
            &clip,
            false,
            &StftConfig::default(),
            &fb,
            &WpeConfig::default(),
        )
        .unwrap();
        for c in 0..4 {
            assert!(stack.channel(c).iter().all(|&v| v == -100.0), "channel {c}");
        }
        for c in 4..7 {
            assert!(stack.channel(c).iter().all(|&v| v == 0.0), "channel {c}");
        }
    }

    #[test]
    fn identical_inputs_are_bit_identical() {
        let clip = fixture_clip(1.0);
        let fb = MelFilterbank::new(128, 512, 24000, 0.0, 12000.0).unwrap();
        let wpe = WpeConfig {
            taps: 10,
            ..WpeConfig::default()
        };
        let a = build_feature_stack(&clip, true, &StftConfig::default(), &fb, &wpe).unwrap();
        let b = build_feature_stack(&clip, true, &StftConfig::default(), &fb, &wpe).unwrap();
        assert_eq!(a.data, b.data);
    }
}
