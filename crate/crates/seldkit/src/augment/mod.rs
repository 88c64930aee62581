//! Spatial augmentation: the 8 audio channel-swap transforms with
//! consistent label remapping and the matching equirectangular frame
//! transforms.

mod acs;
mod avcs;

pub use acs::{acs_audio, acs_labels, acs_table, AcsTransform, ChannelOp, Dipole};
pub use avcs::{angles_to_pixel, angles_to_pixel_continuous, avcs_frame, pixel_to_angles};
