//! Multi-track activity-coupled direction/distance output representation.
//!
//! Per label frame the representation holds 3 tracks x 13 classes x
//! 4 values (x, y, z, distance), flattened to 156. A (track, class) slot
//! is active when its Cartesian vector norm exceeds the activity
//! threshold; the norm doubles as the activity score while its direction
//! is the DOA.

use crate::classes::NUM_CLASSES;
use crate::error::{Error, Result};
use crate::geom::{angular_distance_vec_deg, normalize3, unit_vec_deg, vec_to_angles_deg};
use crate::io::{Event, EventList};

pub const NUM_TRACKS: usize = 3;
pub const VALUES_PER_SLOT: usize = 4;
pub const FRAME_VECTOR_LEN: usize = NUM_TRACKS * NUM_CLASSES * VALUES_PER_SLOT;

/// One frame of the output representation, flattened track-major:
/// `values[(track * 13 + class) * 4 + component]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameVector {
    pub values: [f64; FRAME_VECTOR_LEN],
}

impl Default for FrameVector {
    fn default() -> Self {
        FrameVector {
            values: [0.0; FRAME_VECTOR_LEN],
        }
    }
}

impl FrameVector {
    #[inline]
    pub fn slot(&self, track: usize, class_id: usize) -> &[f64] {
        let base = (track * NUM_CLASSES + class_id) * VALUES_PER_SLOT;
        &self.values[base..base + VALUES_PER_SLOT]
    }

    #[inline]
    pub fn slot_mut(&mut self, track: usize, class_id: usize) -> &mut [f64] {
        let base = (track * NUM_CLASSES + class_id) * VALUES_PER_SLOT;
        &mut self.values[base..base + VALUES_PER_SLOT]
    }
}

/// Decoding thresholds.
#[derive(Debug, Clone, Copy)]
pub struct DecodeConfig {
    pub activity_threshold: f64,
    pub merge_angle_deg: f64,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            activity_threshold: 0.5,
            merge_angle_deg: 15.0,
        }
    }
}

impl DecodeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.activity_threshold > 0.0 && self.activity_threshold < 1.0) {
            return Err(Error::InvalidInput(
                "activity threshold must be in (0, 1)".into(),
            ));
        }
        if !(self.merge_angle_deg > 0.0) {
            return Err(Error::InvalidInput("merge angle must be positive".into()));
        }
        Ok(())
    }
}

/// Encode ground-truth events into per-frame vectors. Active events of a
/// class are assigned to tracks in (source_id, azimuth) order; more than
/// 3 simultaneous same-class events cannot be represented.
pub fn encode(events: &EventList, num_frames: usize) -> Result<Vec<FrameVector>> {
    let mut frames = vec![FrameVector::default(); num_frames];
    // group per (frame, class) with a deterministic track order
    let mut grouped: Vec<&Event> = events.events.iter().collect();
    grouped.sort_by(|a, b| {
        (a.frame, a.class_id, a.source_id)
            .cmp(&(b.frame, b.class_id, b.source_id))
            .then(a.azimuth_deg.total_cmp(&b.azimuth_deg))
            .then(a.elevation_deg.total_cmp(&b.elevation_deg))
    });

    let mut i = 0;
    while i < grouped.len() {
        let (frame, class_id) = (grouped[i].frame, grouped[i].class_id);
        let mut j = i;
        while j < grouped.len() && grouped[j].frame == frame && grouped[j].class_id == class_id {
            j += 1;
        }
        let count = j - i;
        if count > NUM_TRACKS {
            return Err(Error::TooManyEvents {
                frame,
                class_id,
                count,
            });
        }
        if frame >= num_frames {
            return Err(Error::InvalidInput(format!(
                "event at frame {frame} outside the {num_frames}-frame range"
            )));
        }
        for (track, event) in grouped[i..j].iter().enumerate() {
            let dir = unit_vec_deg(event.azimuth_deg, event.elevation_deg);
            let slot = frames[frame].slot_mut(track, class_id);
            slot[0] = dir[0];
            slot[1] = dir[1];
            slot[2] = dir[2];
            slot[3] = event.distance_m;
        }
        i = j;
    }
    Ok(frames)
}

/// Decode one frame vector into events. Same-class detections closer than
/// the merge angle collapse into one event at the renormalized mean
/// direction with averaged distance.
pub fn decode_frame(vec: &FrameVector, frame: usize, cfg: &DecodeConfig) -> Vec<Event> {
    let mut out = Vec::new();
    for class_id in 0..NUM_CLASSES {
        // collect active tracks
        let mut dets: Vec<([f64; 3], f64)> = Vec::new();
        for track in 0..NUM_TRACKS {
            let slot = vec.slot(track, class_id);
            let v = [slot[0], slot[1], slot[2]];
            let norm = crate::geom::norm3(v);
            if norm > cfg.activity_threshold {
                let unit = [v[0] / norm, v[1] / norm, v[2] / norm];
                dets.push((unit, slot[3].max(0.0)));
            }
        }
        // merge near-duplicates; member lists keep the means exact
        let mut clusters: Vec<Vec<([f64; 3], f64)>> = Vec::new();
        'dets: for det in dets {
            for cluster in clusters.iter_mut() {
                let mean = cluster_mean_dir(cluster);
                if angular_distance_vec_deg(mean, det.0) <= cfg.merge_angle_deg {
                    cluster.push(det);
                    continue 'dets;
                }
            }
            clusters.push(vec![det]);
        }
        for cluster in clusters {
            let dir = cluster_mean_dir(&cluster);
            let dir = normalize3(dir).unwrap_or([1.0, 0.0, 0.0]);
            let dist = if cluster.len() == 1 {
                cluster[0].1
            } else {
                cluster.iter().map(|d| d.1).sum::<f64>() / cluster.len() as f64
            };
            let (az, el) = vec_to_angles_deg(dir);
            out.push(Event {
                frame,
                class_id,
                source_id: 0,
                azimuth_deg: az,
                elevation_deg: el,
                distance_m: dist,
            });
        }
    }
    out
}

fn cluster_mean_dir(members: &[([f64; 3], f64)]) -> [f64; 3] {
    let mut m = [0.0; 3];
    for (v, _) in members {
        m[0] += v[0];
        m[1] += v[1];
        m[2] += v[2];
    }
    let n = members.len() as f64;
    [m[0] / n, m[1] / n, m[2] / n]
}

/// Decode a sequence of frame vectors.
pub fn decode(vecs: &[FrameVector], cfg: &DecodeConfig) -> Vec<Vec<Event>> {
    vecs.iter()
        .enumerate()
        .map(|(t, v)| decode_frame(v, t, cfg))
        .collect()
}
