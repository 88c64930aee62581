//! First-order-ambisonics clip type.

use crate::error::{Error, Result};

/// Ambisonic channel ordering tag. The toolkit only handles ACN order
/// (W, Y, Z, X) with SN3D normalization, the delivery convention of the
/// supported recordings; downstream math never indexes channels by
/// position, it goes through the named accessors below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelOrder {
    AcnSn3d,
}

/// ACN channel indices.
pub const ACN_W: usize = 0;
pub const ACN_Y: usize = 1;
pub const ACN_Z: usize = 2;
pub const ACN_X: usize = 3;

/// A 4-channel first-order-ambisonics waveform.
#[derive(Debug, Clone)]
pub struct FoaClip {
    channels: [Vec<f64>; 4],
    sample_rate: u32,
    channel_order: ChannelOrder,
}

impl FoaClip {
    /// Build a clip from channels in ACN order (W, Y, Z, X). All four
    /// channels must have the same length and contain only finite samples.
    pub fn from_acn_channels(channels: [Vec<f64>; 4], sample_rate: u32) -> Result<Self> {
        let len = channels[0].len();
        if channels.iter().any(|c| c.len() != len) {
            return Err(Error::Shape("FOA channels have unequal lengths".into()));
        }
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        for (i, ch) in channels.iter().enumerate() {
            if ch.iter().any(|s| !s.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite sample in channel {i}"
                )));
            }
        }
        Ok(FoaClip {
            channels,
            sample_rate,
            channel_order: ChannelOrder::AcnSn3d,
        })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn channel_order(&self) -> ChannelOrder {
        self.channel_order
    }

    pub fn num_samples(&self) -> usize {
        self.channels[0].len()
    }

    pub fn duration_s(&self) -> f64 {
        self.num_samples() as f64 / self.sample_rate as f64
    }

    /// Channels in ACN file order (W, Y, Z, X).
    pub fn acn_channels(&self) -> &[Vec<f64>; 4] {
        &self.channels
    }

    pub fn w(&self) -> &[f64] {
        &self.channels[ACN_W]
    }

    pub fn x(&self) -> &[f64] {
        &self.channels[ACN_X]
    }

    pub fn y(&self) -> &[f64] {
        &self.channels[ACN_Y]
    }

    pub fn z(&self) -> &[f64] {
        &self.channels[ACN_Z]
    }

    /// Extract the sample range `[start, end)`.
    pub fn slice_samples(&self, start: usize, end: usize) -> Result<FoaClip> {
        if start >= end || end > self.num_samples() {
            return Err(Error::InvalidInput(format!(
                "slice [{start}, {end}) out of bounds for {} samples",
                self.num_samples()
            )));
        }
        let channels = [
            self.channels[0][start..end].to_vec(),
            self.channels[1][start..end].to_vec(),
            self.channels[2][start..end].to_vec(),
            self.channels[3][start..end].to_vec(),
        ];
        Ok(FoaClip {
            channels,
            sample_rate: self.sample_rate,
            channel_order: self.channel_order,
        })
    }

    /// Extract the time range `[start_s, end_s)` in seconds.
    pub fn slice_seconds(&self, start_s: f64, end_s: f64) -> Result<FoaClip> {
        let sr = self.sample_rate as f64;
        let start = (start_s * sr).round() as usize;
        let end = (end_s * sr).round() as usize;
        self.slice_samples(start, end)
    }
}
