//! Synthetic fixtures: FOA plane waves, simple reverberant mixtures, and
//! marker images. Everything is seeded and bit-reproducible so transforms,
//! features and metrics can be verified without recorded data.

use image::RgbImage;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::augment::angles_to_pixel;
use crate::clip::{FoaClip, ACN_W, ACN_X, ACN_Y, ACN_Z};
use crate::error::{Error, Result};
use crate::geom::unit_vec_deg;

/// Source excitation.
#[derive(Debug, Clone, Copy)]
pub enum SignalKind {
    WhiteNoise { seed: u64 },
    Tone { freq_hz: f64 },
    Impulse,
}

/// Synthetic exponential-decay reverb tail. The tail starts `onset_s`
/// after the direct sound and is scaled so the W-channel direct-to-
/// reverberant energy ratio hits `drr_db`.
#[derive(Debug, Clone, Copy)]
pub struct ReverbSpec {
    pub t60_s: f64,
    pub drr_db: f64,
    pub seed: u64,
    pub onset_s: f64,
}

impl ReverbSpec {
    pub fn new(t60_s: f64, drr_db: f64, seed: u64) -> Self {
        ReverbSpec {
            t60_s,
            drr_db,
            seed,
            onset_s: 0.05,
        }
    }
}

/// One synthetic source.
#[derive(Debug, Clone, Copy)]
pub struct SourceSpec {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub distance_m: f64,
    pub signal: SignalKind,
    pub reverb: Option<ReverbSpec>,
}

/// Synthesize a first-order plane wave with SN3D gains
/// `W = s, X = cos(el)cos(az) s, Y = cos(el)sin(az) s, Z = sin(el) s`,
/// optionally adding a diffuse exponentially decaying tail.
pub fn plane_wave_foa(spec: &SourceSpec, duration_s: f64, sample_rate: u32) -> FoaClip {
    let n = (duration_s * sample_rate as f64).round() as usize;
    let s = source_signal(&spec.signal, n, sample_rate);
    let g = unit_vec_deg(spec.azimuth_deg, spec.elevation_deg);

    let mut w: Vec<f64> = s.clone();
    let mut x: Vec<f64> = s.iter().map(|v| g[0] * v).collect();
    let mut y: Vec<f64> = s.iter().map(|v| g[1] * v).collect();
    let mut z: Vec<f64> = s.iter().map(|v| g[2] * v).collect();

    if let Some(rv) = &spec.reverb {
        add_diffuse_tail(&s, rv, sample_rate, &mut w, &mut x, &mut y, &mut z);
    }

    let mut channels: [Vec<f64>; 4] = Default::default();
    channels[ACN_W] = w;
    channels[ACN_Y] = y;
    channels[ACN_Z] = z;
    channels[ACN_X] = x;
    FoaClip::from_acn_channels(channels, sample_rate).expect("synthesized clip is valid")
}

fn source_signal(kind: &SignalKind, n: usize, sample_rate: u32) -> Vec<f64> {
    match kind {
        SignalKind::WhiteNoise { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
        }
        SignalKind::Tone { freq_hz } => {
            let sr = sample_rate as f64;
            (0..n)
                .map(|i| (2.0 * std::f64::consts::PI * freq_hz * i as f64 / sr).sin())
                .collect()
        }
        SignalKind::Impulse => {
            let mut s = vec![0.0; n];
            if !s.is_empty() {
                s[n / 2] = 1.0;
            }
            s
        }
    }
}

fn add_diffuse_tail(
    src: &[f64],
    rv: &ReverbSpec,
    sample_rate: u32,
    w: &mut [f64],
    x: &mut [f64],
    y: &mut [f64],
    z: &mut [f64],
) {
    let sr = sample_rate as f64;
    let onset = (rv.onset_s * sr).round() as usize;
    let tail_len = (1.2 * rv.t60_s * sr).round() as usize;
    let kernel_len = onset + tail_len;
    let mut rng = ChaCha8Rng::seed_from_u64(rv.seed);

    // decorrelated kernels per channel, shared decay envelope; each
    // dipole carries a third of the omni tail energy (diffuse field)
    let mut kernels: [Vec<f64>; 4] = Default::default();
    for (c, kern) in kernels.iter_mut().enumerate() {
        let gain = if c == 0 { 1.0 } else { 1.0 / 3f64.sqrt() };
        *kern = (0..kernel_len)
            .map(|i| {
                if i < onset {
                    0.0
                } else {
                    let t = (i - onset) as f64 / sr;
                    gain * rng.gen_range(-1.0..1.0) * (-6.907755278982137 * t / rv.t60_s).exp()
                }
            })
            .collect();
    }

    let tail_w = fft_convolve(src, &kernels[0], src.len());
    let e_direct: f64 = src.iter().map(|v| v * v).sum();
    let e_tail: f64 = tail_w.iter().map(|v| v * v).sum();
    let scale = if e_tail > 0.0 {
        (e_direct / e_tail * 10f64.powf(-rv.drr_db / 10.0)).sqrt()
    } else {
        0.0
    };

    for (i, t) in tail_w.iter().enumerate() {
        w[i] += scale * t;
    }
    for (kern, ch) in kernels[1..].iter().zip([x, y, z]) {
        let tail = fft_convolve(src, kern, src.len());
        for (i, t) in tail.iter().enumerate() {
            ch[i] += scale * t;
        }
    }
}

/// Linear convolution truncated to `out_len`, via a single large FFT.
fn fft_convolve(a: &[f64], b: &[f64], out_len: usize) -> Vec<f64> {
    let full = a.len() + b.len() - 1;
    let size = full.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);

    let mut fa: Vec<Complex64> = a
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut fb: Vec<Complex64> = b
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(size)
        .collect();
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (va, vb) in fa.iter_mut().zip(&fb) {
        *va *= vb;
    }
    ifft.process(&mut fa);
    let norm = 1.0 / size as f64;
    fa.iter().take(out_len).map(|c| c.re * norm).collect()
}

/// Black equirectangular image with a single white pixel at the mapping
/// of (azimuth, elevation). `width` must be twice `height`.
pub fn marker_image(width: u32, height: u32, az_deg: f64, el_deg: f64) -> Result<RgbImage> {
    if width != 2 * height {
        return Err(Error::Image(format!(
            "marker frame must be 2:1, got {width}x{height}"
        )));
    }
    if !(-90.0..=90.0).contains(&el_deg) {
        return Err(Error::InvalidInput(format!(
            "elevation {el_deg} out of [-90, 90]"
        )));
    }
    let mut img = RgbImage::new(width, height);
    let (c, r) = angles_to_pixel(az_deg, el_deg, width, height);
    img.put_pixel(c, r, image::Rgb([255, 255, 255]));
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(az: f64, el: f64, signal: SignalKind) -> SourceSpec {
        SourceSpec {
            azimuth_deg: az,
            elevation_deg: el,
            distance_m: 1.0,
            signal,
            reverb: None,
        }
    }

    #[test]
    fn cardinal_gain_patterns() {
        let clip = plane_wave_foa(&spec(0.0, 0.0, SignalKind::Tone { freq_hz: 500.0 }), 0.05, 24000);
        for i in 0..clip.num_samples() {
            assert_eq!(clip.x()[i], clip.w()[i]);
            assert!(clip.y()[i].abs() < 1e-12);
            assert!(clip.z()[i].abs() < 1e-12);
        }

        let clip = plane_wave_foa(&spec(90.0, 0.0, SignalKind::Tone { freq_hz: 500.0 }), 0.05, 24000);
        for i in 0..clip.num_samples() {
            assert!((clip.y()[i] - clip.w()[i]).abs() < 1e-12);
            assert!(clip.x()[i].abs() < 1e-12);
        }

        let clip = plane_wave_foa(&spec(0.0, 90.0, SignalKind::Tone { freq_hz: 500.0 }), 0.05, 24000);
        for i in 0..clip.num_samples() {
            assert!((clip.z()[i] - clip.w()[i]).abs() < 1e-12);
            assert!(clip.x()[i].abs() < 1e-12);
            assert!(clip.y()[i].abs() < 1e-12);
        }
    }

    #[test]
    fn dipole_energy_equals_omni_energy_samplewise() {
        let clip = plane_wave_foa(
            &spec(37.0, -22.0, SignalKind::WhiteNoise { seed: 3 }),
            0.1,
            24000,
        );
        for i in 0..clip.num_samples() {
            let d = clip.x()[i].powi(2) + clip.y()[i].powi(2) + clip.z()[i].powi(2);
            let w = clip.w()[i].powi(2);
            assert!((d - w).abs() <= 1e-12 * w.max(1e-30), "sample {i}");
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let s = spec(10.0, 5.0, SignalKind::WhiteNoise { seed: 123 });
        let a = plane_wave_foa(&s, 0.2, 24000);
        let b = plane_wave_foa(&s, 0.2, 24000);
        assert_eq!(a.acn_channels(), b.acn_channels());

        let with_reverb = SourceSpec {
            reverb: Some(ReverbSpec::new(0.3, 0.0, 9)),
            ..s
        };
        let c = plane_wave_foa(&with_reverb, 0.5, 24000);
        let d = plane_wave_foa(&with_reverb, 0.5, 24000);
        assert_eq!(c.acn_channels(), d.acn_channels());
    }

    #[test]
    fn reverb_hits_requested_drr() {
        let s = SourceSpec {
            reverb: Some(ReverbSpec::new(0.5, 0.0, 21)),
            ..spec(0.0, 0.0, SignalKind::WhiteNoise { seed: 4 })
        };
        let dry = plane_wave_foa(&spec(0.0, 0.0, SignalKind::WhiteNoise { seed: 4 }), 3.0, 24000);
        let wet = plane_wave_foa(&s, 3.0, 24000);
        let tail: Vec<f64> = wet.w().iter().zip(dry.w()).map(|(a, b)| a - b).collect();
        let e_dir: f64 = dry.w().iter().map(|v| v * v).sum();
        let e_tail: f64 = tail.iter().map(|v| v * v).sum();
        let drr = 10.0 * (e_dir / e_tail).log10();
        assert!(drr.abs() < 0.2, "DRR {drr} dB, wanted 0 dB");
    }

    #[test]
    fn impulse_sits_at_the_midpoint() {
        let clip = plane_wave_foa(&spec(0.0, 0.0, SignalKind::Impulse), 0.01, 24000);
        let n = clip.num_samples();
        assert_eq!(clip.w()[n / 2], 1.0);
        assert_eq!(clip.w().iter().filter(|&&v| v != 0.0).count(), 1);
    }

    #[test]
    fn marker_pixels_follow_the_convention() {
        let img = marker_image(448, 224, 0.0, 0.0).unwrap();
        assert_eq!(img.get_pixel(224, 112).0, [255, 255, 255]);

        let img = marker_image(448, 224, 179.9, 0.0).unwrap();
        let white = img
            .enumerate_pixels()
            .find(|(_, _, p)| p.0 == [255, 255, 255])
            .unwrap();
        assert_eq!(white.0, 0, "near +180 lands in the leftmost column");

        let img = marker_image(448, 224, 0.0, 89.9).unwrap();
        let white = img
            .enumerate_pixels()
            .find(|(_, _, p)| p.0 == [255, 255, 255])
            .unwrap();
        assert_eq!(white.1, 0, "near +90 elevation lands in the top row");

        assert!(marker_image(400, 224, 0.0, 0.0).is_err());
    }

    #[test]
    fn fft_convolution_matches_direct_convolution() {
        let a = [1.0, -2.0, 0.5, 3.0, 0.0, 1.5];
        let b = [0.5, 0.25, -1.0];
        let got = fft_convolve(&a, &b, a.len());
        for i in 0..a.len() {
            let mut expect = 0.0;
            for (k, &bk) in b.iter().enumerate() {
                if i >= k {
                    expect += bk * a[i - k];
                }
            }
            assert!((got[i] - expect).abs() < 1e-12, "index {i}");
        }
    }
}
