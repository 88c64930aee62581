//! Fixed-length chunking of sequences and label slicing.

use crate::error::{Error, Result};
use crate::io::events::{Event, EventList};

/// Chunking parameters. Label frames tick at `label_fps` (10 per second
/// for the supported datasets), so `label_fps * length_s` must land on an
/// integer count.
#[derive(Debug, Clone, Copy)]
pub struct ChunkSpec {
    pub length_s: f64,
    pub hop_s: f64,
    pub label_fps: u32,
}

impl ChunkSpec {
    pub fn new(length_s: f64, hop_s: f64, label_fps: u32) -> Result<Self> {
        if !(length_s > 0.0) {
            return Err(Error::InvalidInput("chunk length must be positive".into()));
        }
        if !(hop_s > 0.0) {
            return Err(Error::InvalidInput("chunk hop must be positive".into()));
        }
        let frames = label_fps as f64 * length_s;
        if (frames - frames.round()).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "label_fps * length_s = {frames} is not an integer frame count"
            )));
        }
        Ok(ChunkSpec {
            length_s,
            hop_s,
            label_fps,
        })
    }

    /// Overlapping training layout: 3 s chunks every 1 s.
    pub fn training() -> Self {
        ChunkSpec {
            length_s: 3.0,
            hop_s: 1.0,
            label_fps: 10,
        }
    }

    /// Tiling evaluation layout: 3 s chunks, no overlap.
    pub fn evaluation() -> Self {
        ChunkSpec {
            length_s: 3.0,
            hop_s: 3.0,
            label_fps: 10,
        }
    }

    /// Label frames per chunk.
    pub fn label_frames(&self) -> usize {
        (self.label_fps as f64 * self.length_s).round() as usize
    }
}

/// Chunk start/end times covering `[0, total_s]`. Chunk `k` spans
/// `[k*hop, k*hop + length]`; partial trailing chunks are dropped.
pub fn chunk_indices(total_s: f64, spec: &ChunkSpec) -> Result<Vec<(f64, f64)>> {
    if total_s < spec.length_s {
        return Err(Error::TooShort(format!(
            "{total_s} s input is shorter than one {} s chunk",
            spec.length_s
        )));
    }
    let count = ((total_s - spec.length_s) / spec.hop_s + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| {
            let start = k as f64 * spec.hop_s;
            (start, start + spec.length_s)
        })
        .collect())
}

/// Events with `start*10 <= frame < end*10`, re-based to chunk-local frame
/// indices. Bounds must be multiples of 0.1 s.
pub fn slice_events(events: &EventList, start_s: f64, end_s: f64) -> EventList {
    let start_frame = (start_s * 10.0).round() as usize;
    let end_frame = (end_s * 10.0).round() as usize;
    let sliced: Vec<Event> = events
        .events
        .iter()
        .filter(|e| e.frame >= start_frame && e.frame < end_frame)
        .map(|e| Event {
            frame: e.frame - start_frame,
            ..e.clone()
        })
        .collect();
    EventList::new(sliced)
}
