//! File ingest: FOA WAV audio, event-metadata CSV, prediction CSV, and
//! chunking of sequences into fixed-length segments.

mod chunk;
mod events;
mod wav;

pub use chunk::{chunk_indices, slice_events, ChunkSpec};
pub use events::{
    group_by_frame, read_metadata_csv, read_predictions_csv, write_metadata_csv,
    write_predictions_csv, DistanceUnit, Event, EventList,
};
pub use wav::{read_foa_wav, write_foa_wav};
