//! Mel filterbank and log-mel spectrograms.

use crate::error::{Error, Result};
use crate::features::stft::Spectrogram;

/// Log floor applied before the dB conversion; an all-zero spectrogram
/// maps to exactly 10*log10(1e-10) = -100 dB.
pub const LOG_FLOOR: f64 = 1e-10;

/// HTK-style mel scale.
pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular mel filterbank over FFT bins.
///
/// Each filter is the unit-peak triangle with mel-equally-spaced corners,
/// averaged over every FFT bin's bandwidth rather than point-sampled at
/// the bin center. Narrow low-frequency triangles that fall between two
/// bin centers still land weight on the bin whose band covers them, so
/// every filter row is nonzero and adjacent filters still sum to one over
/// the interior of the band.
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    pub num_bands: usize,
    pub num_bins: usize,
    pub f_min: f64,
    pub f_max: f64,
    weights: Vec<f64>,
    /// Per-band nonzero bin range `[start, end)`.
    row_ranges: Vec<(usize, usize)>,
    centers_hz: Vec<f64>,
}

impl MelFilterbank {
    pub fn new(
        num_bands: usize,
        win_len: usize,
        sample_rate: u32,
        f_min: f64,
        f_max: f64,
    ) -> Result<Self> {
        let nyquist = sample_rate as f64 / 2.0;
        if num_bands == 0 {
            return Err(Error::InvalidInput("mel bands must be >= 1".into()));
        }
        if !(0.0 <= f_min && f_min < f_max && f_max <= nyquist) {
            return Err(Error::InvalidInput(format!(
                "invalid mel band edges [{f_min}, {f_max}] for nyquist {nyquist}"
            )));
        }
        let num_bins = win_len / 2 + 1;
        let bin_hz = sample_rate as f64 / win_len as f64;

        let mel_lo = hz_to_mel(f_min);
        let mel_hi = hz_to_mel(f_max);
        let corners: Vec<f64> = (0..num_bands + 2)
            .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (num_bands + 1) as f64))
            .collect();

        let mut weights = vec![0.0f64; num_bands * num_bins];
        let mut row_ranges = Vec::with_capacity(num_bands);
        for band in 0..num_bands {
            let (left, center, right) = (corners[band], corners[band + 1], corners[band + 2]);
            let mut start = usize::MAX;
            let mut end = 0usize;
            for bin in 0..num_bins {
                let f = bin as f64 * bin_hz;
                let lo = (f - bin_hz / 2.0).max(left);
                let hi = (f + bin_hz / 2.0).min(right);
                if hi <= lo {
                    continue;
                }
                let w = triangle_integral(lo, hi, left, center, right) / bin_hz;
                if w > 0.0 {
                    weights[band * num_bins + bin] = w;
                    start = start.min(bin);
                    end = end.max(bin + 1);
                }
            }
            if start == usize::MAX {
                return Err(Error::InvalidInput(format!(
                    "mel band {band} has no FFT bin support"
                )));
            }
            row_ranges.push((start, end));
        }

        Ok(MelFilterbank {
            num_bands,
            num_bins,
            f_min,
            f_max,
            weights,
            row_ranges,
            centers_hz: corners[1..=num_bands].to_vec(),
        })
    }

    #[inline]
    pub fn weight(&self, band: usize, bin: usize) -> f64 {
        self.weights[band * self.num_bins + bin]
    }

    pub fn center_frequencies_hz(&self) -> &[f64] {
        &self.centers_hz
    }

    /// Total triangle weight landing on each FFT bin.
    pub fn bin_coverage(&self) -> Vec<f64> {
        let mut cover = vec![0.0; self.num_bins];
        for band in 0..self.num_bands {
            for (bin, c) in cover.iter_mut().enumerate() {
                *c += self.weight(band, bin);
            }
        }
        cover
    }

    /// Total weight of one band, for flatness normalization.
    pub fn band_weight(&self, band: usize) -> f64 {
        let (s, e) = self.row_ranges[band];
        self.weights[band * self.num_bins + s..band * self.num_bins + e]
            .iter()
            .sum()
    }

    /// Aggregate one frame of per-bin values into per-band values.
    pub fn apply(&self, frame: &[f64], out: &mut [f64]) {
        debug_assert_eq!(frame.len(), self.num_bins);
        debug_assert_eq!(out.len(), self.num_bands);
        for band in 0..self.num_bands {
            let (s, e) = self.row_ranges[band];
            let row = &self.weights[band * self.num_bins + s..band * self.num_bins + e];
            let mut acc = 0.0;
            for (w, v) in row.iter().zip(&frame[s..e]) {
                acc += w * v;
            }
            out[band] = acc;
        }
    }
}

/// Integral of the unit-peak triangle (corners `left < center < right`)
/// over `[lo, hi]`, which must lie inside `[left, right]`.
fn triangle_integral(lo: f64, hi: f64, left: f64, center: f64, right: f64) -> f64 {
    let mut total = 0.0;
    // rising edge
    let (a, b) = (lo.max(left), hi.min(center));
    if b > a {
        total += ((b - left).powi(2) - (a - left).powi(2)) / (2.0 * (center - left));
    }
    // falling edge
    let (a, b) = (lo.max(center), hi.min(right));
    if b > a {
        total += ((right - a).powi(2) - (right - b).powi(2)) / (2.0 * (right - center));
    }
    total
}

/// Log-mel spectrogram of one channel: `10*log10(max(fb |X|^2, 1e-10))`,
/// laid out frame-major `[num_frames x num_bands]`.
pub fn logmel(spec: &Spectrogram, fb: &MelFilterbank) -> Result<Vec<f64>> {
    if spec.num_bins != fb.num_bins {
        return Err(Error::Shape(format!(
            "spectrogram has {} bins, filterbank expects {}",
            spec.num_bins, fb.num_bins
        )));
    }
    let mut out = vec![0.0f64; spec.num_frames * fb.num_bands];
    let mut power = vec![0.0f64; spec.num_bins];
    for t in 0..spec.num_frames {
        for (p, c) in power.iter_mut().zip(spec.frame(t)) {
            *p = c.norm_sqr();
        }
        let row = &mut out[t * fb.num_bands..(t + 1) * fb.num_bands];
        fb.apply(&power, row);
        for v in row.iter_mut() {
            *v = 10.0 * v.max(LOG_FLOOR).log10();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::stft::{stft_channel, StftConfig};
    use rand::{Rng, SeedableRng};

    fn default_fb() -> MelFilterbank {
        MelFilterbank::new(128, 512, 24000, 0.0, 12000.0).unwrap()
    }

    #[test]
    fn mel_of_700_hz() {
        let expected = 2595.0 * 2f64.log10();
        assert!((hz_to_mel(700.0) - expected).abs() < 1e-9);
        assert!((expected - 781.17).abs() < 0.01);
    }

    #[test]
    fn mel_scale_round_trip() {
        for f in [0.0, 10.0, 700.0, 4321.0, 12000.0] {
            assert!((mel_to_hz(hz_to_mel(f)) - f).abs() < 1e-6);
        }
    }

    #[test]
    fn every_interior_bin_is_covered() {
        let fb = default_fb();
        let cover = fb.bin_coverage();
        let bin_hz = 24000.0 / 512.0;
        for (bin, &c) in cover.iter().enumerate() {
            let f = bin as f64 * bin_hz;
            if f > 0.0 && f < 12000.0 {
                assert!(c > 0.0, "bin {bin} at {f} Hz has zero coverage");
            }
        }
    }

    #[test]
    fn every_band_has_support() {
        let fb = default_fb();
        for band in 0..fb.num_bands {
            assert!(fb.band_weight(band) > 0.0, "band {band} empty");
        }
    }

    #[test]
    fn centers_are_monotonic() {
        let fb = default_fb();
        let centers = fb.center_frequencies_hz();
        for w in centers.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn triangles_partition_the_interior() {
        // away from the first/last center the triangles sum to one
        let fb = default_fb();
        let centers = fb.center_frequencies_hz();
        let bin_hz = 24000.0 / 512.0;
        let cover = fb.bin_coverage();
        for (bin, &c) in cover.iter().enumerate() {
            let f = bin as f64 * bin_hz;
            if f - bin_hz / 2.0 > centers[0] && f + bin_hz / 2.0 < centers[fb.num_bands - 1] {
                assert!((c - 1.0).abs() < 1e-9, "bin {bin}: coverage {c}");
            }
        }
    }

    #[test]
    fn invalid_edges_rejected() {
        assert!(MelFilterbank::new(128, 512, 24000, -1.0, 12000.0).is_err());
        assert!(MelFilterbank::new(128, 512, 24000, 0.0, 13000.0).is_err());
        assert!(MelFilterbank::new(128, 512, 24000, 500.0, 500.0).is_err());
        assert!(MelFilterbank::new(0, 512, 24000, 0.0, 12000.0).is_err());
    }

    #[test]
    fn zero_spectrogram_hits_the_floor() {
        let fb = default_fb();
        let spec = Spectrogram::zeros(10, 257);
        let lm = logmel(&spec, &fb).unwrap();
        assert!(lm.iter().all(|&v| v == -100.0));
    }

    #[test]
    fn doubling_amplitude_adds_six_db() {
        let cfg = StftConfig::default();
        let fb = default_fb();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..24000).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let x2: Vec<f64> = x.iter().map(|v| v * 2.0).collect();

        let a = logmel(&stft_channel(&x, &cfg).unwrap(), &fb).unwrap();
        let b = logmel(&stft_channel(&x2, &cfg).unwrap(), &fb).unwrap();
        let shift = 10.0 * 4f64.log10();
        for (&va, &vb) in a.iter().zip(&b) {
            if va > -95.0 {
                assert!((vb - va - shift).abs() < 1e-9, "{va} -> {vb}");
            }
        }
    }

    #[test]
    fn white_noise_is_flat_after_band_normalization() {
        let cfg = StftConfig::default();
        let fb = default_fb();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let x: Vec<f64> = (0..72000).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let spec = stft_channel(&x, &cfg).unwrap();
        let lm = logmel(&spec, &fb).unwrap();

        // average power per band over time, normalized by band weight
        let mut band_db = vec![0.0f64; fb.num_bands];
        for t in 0..spec.num_frames {
            for b in 0..fb.num_bands {
                band_db[b] += 10f64.powf(lm[t * fb.num_bands + b] / 10.0);
            }
        }
        let norm: Vec<f64> = (0..fb.num_bands)
            .map(|b| 10.0 * (band_db[b] / spec.num_frames as f64 / fb.band_weight(b)).log10())
            .collect();
        let mean = norm.iter().sum::<f64>() / norm.len() as f64;
        for (b, &v) in norm.iter().enumerate() {
            assert!((v - mean).abs() < 3.0, "band {b}: {v} dB vs mean {mean}");
        }
    }
}
