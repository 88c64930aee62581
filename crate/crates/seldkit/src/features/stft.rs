//! Short-time Fourier analysis and overlap-add resynthesis.
//!
//! Frames are centered on multiples of the hop with reflect padding at the
//! edges, so a signal whose length is a hop multiple produces exactly
//! `num_samples / hop` frames (72000 samples at hop 150 -> 480 frames).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::clip::FoaClip;
use crate::error::{Error, Result};

/// Analysis parameters: periodic Hann window of `win_len` samples, frame
/// advance of `hop` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StftConfig {
    pub win_len: usize,
    pub hop: usize,
}

impl Default for StftConfig {
    fn default() -> Self {
        StftConfig {
            win_len: 512,
            hop: 150,
        }
    }
}

impl StftConfig {
    pub fn num_bins(&self) -> usize {
        self.win_len / 2 + 1
    }

    pub fn num_frames(&self, num_samples: usize) -> usize {
        num_samples / self.hop
    }

    fn validate(&self) -> Result<()> {
        if self.win_len < 2 || self.win_len % 2 != 0 {
            return Err(Error::InvalidInput(
                "stft window length must be even and >= 2".into(),
            ));
        }
        if self.hop == 0 || self.hop > self.win_len / 2 {
            return Err(Error::InvalidInput(
                "stft hop must be in 1..=win_len/2 for invertible analysis".into(),
            ));
        }
        Ok(())
    }
}

/// Complex spectrogram of a single channel, frame-major.
#[derive(Debug, Clone)]
pub struct Spectrogram {
    pub num_frames: usize,
    pub num_bins: usize,
    pub data: Vec<Complex64>,
}

impl Spectrogram {
    pub fn zeros(num_frames: usize, num_bins: usize) -> Self {
        Spectrogram {
            num_frames,
            num_bins,
            data: vec![Complex64::new(0.0, 0.0); num_frames * num_bins],
        }
    }

    #[inline]
    pub fn bin(&self, frame: usize, bin: usize) -> Complex64 {
        self.data[frame * self.num_bins + bin]
    }

    pub fn frame(&self, frame: usize) -> &[Complex64] {
        &self.data[frame * self.num_bins..(frame + 1) * self.num_bins]
    }

    pub fn frame_mut(&mut self, frame: usize) -> &mut [Complex64] {
        &mut self.data[frame * self.num_bins..(frame + 1) * self.num_bins]
    }
}

/// Per-channel spectrograms of a FOA clip, channels in ACN order.
#[derive(Debug, Clone)]
pub struct StftTensor {
    pub channels: Vec<Spectrogram>,
    pub sample_rate: u32,
    pub config: StftConfig,
}

impl StftTensor {
    pub fn num_frames(&self) -> usize {
        self.channels.first().map_or(0, |c| c.num_frames)
    }
}

pub fn hann_periodic(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / len as f64).cos()))
        .collect()
}

/// Reflect-pad lookup: sample index `i` relative to the original signal,
/// where `i` may run from `-pad` to `n + pad - 1`.
#[inline]
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let j = if i < 0 {
        -i
    } else if i >= n {
        2 * n - 2 - i
    } else {
        i
    };
    debug_assert!((0..n).contains(&j));
    j as usize
}

/// Forward STFT of one channel.
pub fn stft_channel(x: &[f64], cfg: &StftConfig) -> Result<Spectrogram> {
    cfg.validate()?;
    if x.len() < cfg.win_len {
        return Err(Error::TooShort(format!(
            "{} samples, stft needs at least {}",
            x.len(),
            cfg.win_len
        )));
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(cfg.win_len);
    Ok(stft_channel_with(x, cfg, fft.as_ref()))
}

fn stft_channel_with(x: &[f64], cfg: &StftConfig, fft: &dyn rustfft::Fft<f64>) -> Spectrogram {
    let win = hann_periodic(cfg.win_len);
    let half = (cfg.win_len / 2) as isize;
    let num_frames = cfg.num_frames(x.len());
    let num_bins = cfg.num_bins();

    let mut out = Spectrogram::zeros(num_frames, num_bins);
    let mut buf = vec![Complex64::new(0.0, 0.0); cfg.win_len];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];

    for t in 0..num_frames {
        let center = (t * cfg.hop) as isize;
        for i in 0..cfg.win_len {
            let src = reflect(center - half + i as isize, x.len());
            buf[i] = Complex64::new(x[src] * win[i], 0.0);
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        out.frame_mut(t).copy_from_slice(&buf[..num_bins]);
    }
    out
}

/// Forward STFT of all four FOA channels, preserving ACN channel order.
pub fn stft(clip: &FoaClip, cfg: &StftConfig) -> Result<StftTensor> {
    cfg.validate()?;
    if clip.num_samples() < cfg.win_len {
        return Err(Error::TooShort(format!(
            "{} samples, stft needs at least {}",
            clip.num_samples(),
            cfg.win_len
        )));
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(cfg.win_len);
    let channels = clip
        .acn_channels()
        .iter()
        .map(|ch| stft_channel_with(ch, cfg, fft.as_ref()))
        .collect();
    Ok(StftTensor {
        channels,
        sample_rate: clip.sample_rate(),
        config: *cfg,
    })
}

/// Inverse STFT by overlap-add with synthesis-window normalization.
/// `num_samples` must reproduce the frame count of the analysis.
pub fn istft(spec: &Spectrogram, cfg: &StftConfig, num_samples: usize) -> Result<Vec<f64>> {
    cfg.validate()?;
    if spec.num_bins != cfg.num_bins() {
        return Err(Error::Shape(format!(
            "spectrogram has {} bins, config expects {}",
            spec.num_bins,
            cfg.num_bins()
        )));
    }
    if spec.num_frames != cfg.num_frames(num_samples) {
        return Err(Error::Shape(format!(
            "length mismatch: {} frames cannot resynthesize {} samples at hop {}",
            spec.num_frames, num_samples, cfg.hop
        )));
    }

    let win = hann_periodic(cfg.win_len);
    let pad = cfg.win_len / 2;
    let padded_len = num_samples + 2 * pad;
    let mut acc = vec![0.0f64; padded_len];
    let mut den = vec![0.0f64; padded_len];

    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(cfg.win_len);
    let mut buf = vec![Complex64::new(0.0, 0.0); cfg.win_len];
    let mut scratch = vec![Complex64::new(0.0, 0.0); ifft.get_inplace_scratch_len()];
    let inv_n = 1.0 / cfg.win_len as f64;

    for t in 0..spec.num_frames {
        let bins = spec.frame(t);
        buf[..spec.num_bins].copy_from_slice(bins);
        // rebuild the upper half from Hermitian symmetry of a real frame
        for k in 1..cfg.win_len / 2 {
            buf[cfg.win_len - k] = bins[k].conj();
        }
        ifft.process_with_scratch(&mut buf, &mut scratch);

        let start = t * cfg.hop;
        for i in 0..cfg.win_len {
            let y = buf[i].re * inv_n;
            acc[start + i] += win[i] * y;
            den[start + i] += win[i] * win[i];
        }
    }

    Ok((0..num_samples)
        .map(|j| {
            let d = den[pad + j];
            if d > 1e-12 {
                acc[pad + j] / d
            } else {
                0.0
            }
        })
        .collect())
}
