//! Audio input features: STFT, log-mel spectrograms, mel-space intensity
//! vectors, and direct/reverberant decomposition of the omni channel.

mod intensity;
mod mel;
mod stack;
mod stft;
mod wpe;

pub use intensity::intensity_vectors;
pub use mel::{hz_to_mel, logmel, mel_to_hz, MelFilterbank, LOG_FLOOR};
pub use stack::{build_feature_stack, FeatureStack, StackKind};
pub use stft::{hann_periodic, istft, stft, stft_channel, Spectrogram, StftConfig, StftTensor};
pub use wpe::{wpe_direct, WpeConfig};
