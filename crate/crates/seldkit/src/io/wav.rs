//! WAV ingest and export for FOA clips.

use std::path::Path;

use crate::clip::FoaClip;
use crate::error::{Error, Result};

/// Read a 4-channel FOA WAV file. Integer PCM (16/24/32 bit) is scaled to
/// `[-1, 1]`; 32-bit float is passed through. Channels are kept in file
/// order, which for the supported recordings is ACN (W, Y, Z, X).
pub fn read_foa_wav(path: &Path, expected_sample_rate: u32) -> Result<FoaClip> {
    let reader = hound::WavReader::open(path).map_err(|e| wav_err(path, e))?;
    let spec = reader.spec();

    if spec.channels != 4 {
        return Err(Error::ChannelCount {
            path: path.to_path_buf(),
            found: spec.channels,
        });
    }
    if spec.sample_rate != expected_sample_rate {
        return Err(Error::SampleRate {
            path: path.to_path_buf(),
            expected: expected_sample_rate,
            found: spec.sample_rate,
        });
    }

    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => read_scaled::<i16>(reader, path, 1 << 15)?,
        (hound::SampleFormat::Int, 24) => read_scaled::<i32>(reader, path, 1 << 23)?,
        (hound::SampleFormat::Int, 32) => read_scaled::<i32>(reader, path, 1 << 31)?,
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| v as f64).map_err(|e| wav_err(path, e)))
            .collect::<Result<_>>()?,
        (fmt, bits) => {
            return Err(Error::Wav {
                path: path.to_path_buf(),
                reason: format!("unsupported sample format {fmt:?} at {bits} bits"),
            })
        }
    };

    if interleaved.len() % 4 != 0 {
        return Err(Error::Wav {
            path: path.to_path_buf(),
            reason: "truncated sample data".into(),
        });
    }
    if interleaved.iter().any(|s| !s.is_finite()) {
        return Err(Error::Wav {
            path: path.to_path_buf(),
            reason: "non-finite sample".into(),
        });
    }

    let frames = interleaved.len() / 4;
    let mut channels = [
        Vec::with_capacity(frames),
        Vec::with_capacity(frames),
        Vec::with_capacity(frames),
        Vec::with_capacity(frames),
    ];
    for frame in interleaved.chunks_exact(4) {
        for (c, &s) in frame.iter().enumerate() {
            channels[c].push(s);
        }
    }
    FoaClip::from_acn_channels(channels, spec.sample_rate)
}

fn read_scaled<S>(
    reader: hound::WavReader<std::io::BufReader<std::fs::File>>,
    path: &Path,
    full_scale: i64,
) -> Result<Vec<f64>>
where
    S: hound::Sample + Into<i64>,
{
    let scale = 1.0 / full_scale as f64;
    reader
        .into_samples::<S>()
        .map(|s| {
            s.map(|v| v.into() as f64 * scale)
                .map_err(|e| wav_err(path, e))
        })
        .collect()
}

/// Write a FOA clip as a 32-bit float WAV in ACN channel order.
pub fn write_foa_wav(path: &Path, clip: &FoaClip) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 4,
        sample_rate: clip.sample_rate(),
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(|e| wav_err(path, e))?;
    let ch = clip.acn_channels();
    for i in 0..clip.num_samples() {
        for c in ch.iter() {
            writer
                .write_sample(c[i] as f32)
                .map_err(|e| wav_err(path, e))?;
        }
    }
    writer.finalize().map_err(|e| wav_err(path, e))
}

fn wav_err(path: &Path, e: hound::Error) -> Error {
    Error::Wav {
        path: path.to_path_buf(),
        reason: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_pcm16(path: &Path, channels: u16, sample_rate: u32, frames: &[Vec<i16>]) {
        let spec = hound::WavSpec {
            channels,
            sample_rate,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(path, spec).unwrap();
        for frame in frames {
            for &s in frame {
                w.write_sample(s).unwrap();
            }
        }
        w.finalize().unwrap();
    }

    #[test]
    fn reads_a_4ch_pcm16_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fixture.wav");
        let frames: Vec<Vec<i16>> = (0..72000).map(|i| vec![(i % 100) as i16, 0, 0, 0]).collect();
        write_pcm16(&path, 4, 24000, &frames);

        let clip = read_foa_wav(&path, 24000).unwrap();
        assert_eq!(clip.num_samples(), 72000);
        assert_eq!(clip.sample_rate(), 24000);
    }

    #[test]
    fn pcm16_full_scale_mapping() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scale.wav");
        write_pcm16(&path, 4, 24000, &[vec![16384, -16384, 32767, 0]]);

        let clip = read_foa_wav(&path, 24000).unwrap();
        assert!((clip.w()[0] - 0.5).abs() < 1e-4);
        assert!((clip.y()[0] + 0.5).abs() < 1e-4);
        assert!((clip.z()[0] - 1.0).abs() < 1e-3);
        assert_eq!(clip.x()[0], 0.0);
    }

    #[test]
    fn rejects_stereo() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stereo.wav");
        write_pcm16(&path, 2, 24000, &[vec![0, 0]]);

        let err = read_foa_wav(&path, 24000).unwrap_err();
        assert!(err.to_string().contains("expected 4 channels"), "{err}");
    }

    #[test]
    fn rejects_wrong_sample_rate() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sr.wav");
        write_pcm16(&path, 4, 48000, &[vec![0, 0, 0, 0]]);

        let err = read_foa_wav(&path, 24000).unwrap_err();
        assert!(err.to_string().contains("sample rate"), "{err}");
    }

    #[test]
    fn rejects_garbage_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.wav");
        std::fs::write(&path, b"not a riff file at all").unwrap();
        assert!(read_foa_wav(&path, 24000).is_err());
    }

    #[test]
    fn float_round_trip_is_exact_at_f32() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.wav");
        let w: Vec<f64> = (0..480).map(|i| ((i as f64) * 0.013).sin() as f32 as f64).collect();
        let clip = FoaClip::from_acn_channels(
            [w.clone(), w.clone(), w.clone(), w.clone()],
            24000,
        )
        .unwrap();
        write_foa_wav(&path, &clip).unwrap();
        let back = read_foa_wav(&path, 24000).unwrap();
        assert_eq!(back.w(), clip.w());
        assert_eq!(back.x(), clip.x());
    }
}
