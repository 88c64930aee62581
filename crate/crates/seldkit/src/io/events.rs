//! Event-metadata and prediction CSV formats.
//!
//! Metadata rows are `frame,class,source,azimuth,elevation,distance` with
//! integer-ish angle fields and a configurable distance unit. Prediction
//! rows are `frame,class,az_deg,el_deg,dist_m`, always in meters.

use std::path::Path;

use crate::classes::NUM_CLASSES;
use crate::error::{Error, Result};

/// One sound event at one label frame (100 ms units).
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub frame: usize,
    pub class_id: usize,
    pub source_id: i32,
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub distance_m: f64,
}

/// Frame-indexed sound events, canonically sorted by
/// (frame, class, source).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventList {
    pub events: Vec<Event>,
}

impl EventList {
    pub fn new(mut events: Vec<Event>) -> Self {
        sort_canonical(&mut events);
        EventList { events }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn max_frame(&self) -> Option<usize> {
        self.events.iter().map(|e| e.frame).max()
    }
}

fn sort_canonical(events: &mut [Event]) {
    events.sort_by(|a, b| {
        (a.frame, a.class_id, a.source_id)
            .cmp(&(b.frame, b.class_id, b.source_id))
            .then(a.azimuth_deg.total_cmp(&b.azimuth_deg))
    });
}

/// Unit of the metadata distance column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceUnit {
    Centimeters,
    Meters,
}

impl DistanceUnit {
    pub fn to_meters(self, value: f64) -> f64 {
        match self {
            DistanceUnit::Centimeters => value * 0.01,
            DistanceUnit::Meters => value,
        }
    }

    pub fn from_meters(self, meters: f64) -> f64 {
        match self {
            DistanceUnit::Centimeters => meters * 100.0,
            DistanceUnit::Meters => meters,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "cm" => Some(DistanceUnit::Centimeters),
            "m" => Some(DistanceUnit::Meters),
            _ => None,
        }
    }
}

/// Read a metadata CSV. Distances are normalized to meters and rows come
/// back canonically sorted.
pub fn read_metadata_csv(path: &Path, unit: DistanceUnit) -> Result<EventList> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_open_err(path, e))?;

    let mut events = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx as u64 + 1;
        let record = record.map_err(|e| csv_err(path, line, e.to_string()))?;
        if record.len() != 6 {
            return Err(csv_err(
                path,
                line,
                format!("expected 6 fields, found {}", record.len()),
            ));
        }
        let field = |i: usize, name: &str| -> Result<f64> {
            record[i]
                .parse::<f64>()
                .map_err(|_| csv_err(path, line, format!("non-numeric {name} `{}`", &record[i])))
        };

        let frame = field(0, "frame")?;
        if frame < 0.0 || frame.fract() != 0.0 {
            return Err(csv_err(path, line, format!("invalid frame `{frame}`")));
        }
        let class = field(1, "class")?;
        if class.fract() != 0.0 || class < 0.0 || class as usize >= NUM_CLASSES {
            return Err(csv_err(path, line, "class_id out of range".into()));
        }
        let source = field(2, "source")?;
        let mut azimuth = field(3, "azimuth")?;
        if azimuth == 180.0 {
            azimuth = -180.0;
        }
        if !(-180.0..180.0).contains(&azimuth) {
            return Err(csv_err(path, line, "azimuth out of range".into()));
        }
        let elevation = field(4, "elevation")?;
        if !(-90.0..=90.0).contains(&elevation) {
            return Err(csv_err(path, line, "elevation out of range".into()));
        }
        let distance = field(5, "distance")?;
        if !distance.is_finite() || distance < 0.0 {
            return Err(csv_err(path, line, "negative distance".into()));
        }

        events.push(Event {
            frame: frame as usize,
            class_id: class as usize,
            source_id: source as i32,
            azimuth_deg: azimuth,
            elevation_deg: elevation,
            distance_m: unit.to_meters(distance),
        });
    }
    Ok(EventList::new(events))
}

/// Write a metadata CSV in the ingest schema, converting distances from
/// meters back to the requested unit.
pub fn write_metadata_csv(path: &Path, events: &EventList, unit: DistanceUnit) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| csv_open_err(path, e))?;
    for e in &events.events {
        writer
            .write_record(&[
                e.frame.to_string(),
                e.class_id.to_string(),
                e.source_id.to_string(),
                e.azimuth_deg.to_string(),
                e.elevation_deg.to_string(),
                unit.from_meters(e.distance_m).to_string(),
            ])
            .map_err(|e| csv_open_err(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Read a prediction CSV (`frame,class,az_deg,el_deg,dist_m`). Also accepts
/// the 6-column metadata schema, in which case `meta_unit` applies to the
/// distance column.
pub fn read_predictions_csv(path: &Path, meta_unit: DistanceUnit) -> Result<EventList> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_open_err(path, e))?;

    let mut events = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx as u64 + 1;
        let record = record.map_err(|e| csv_err(path, line, e.to_string()))?;
        if record.len() != 5 && record.len() != 6 {
            return Err(csv_err(
                path,
                line,
                format!("expected 5 or 6 fields, found {}", record.len()),
            ));
        }
        let is_meta = record.len() == 6;
        let field = |i: usize| -> Result<f64> {
            record[i]
                .parse::<f64>()
                .map_err(|_| csv_err(path, line, format!("non-numeric field `{}`", &record[i])))
        };
        let frame = field(0)? as usize;
        let class = field(1)?;
        if class.fract() != 0.0 || class < 0.0 || class as usize >= NUM_CLASSES {
            return Err(csv_err(path, line, "class_id out of range".into()));
        }
        let (source_id, angle_base) = if is_meta {
            (field(2)? as i32, 3)
        } else {
            (0, 2)
        };
        let azimuth = field(angle_base)?;
        let elevation = field(angle_base + 1)?;
        let distance = field(angle_base + 2)?;
        if !distance.is_finite() || distance < 0.0 {
            return Err(csv_err(path, line, "negative distance".into()));
        }
        events.push(Event {
            frame,
            class_id: class as usize,
            source_id,
            azimuth_deg: azimuth,
            elevation_deg: elevation,
            distance_m: if is_meta {
                meta_unit.to_meters(distance)
            } else {
                distance
            },
        });
    }
    Ok(EventList::new(events))
}

/// Write a prediction CSV row per event: `frame,class,az_deg,el_deg,dist_m`.
pub fn write_predictions_csv(path: &Path, frames: &[Vec<Event>]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| csv_open_err(path, e))?;
    for (frame_idx, events) in frames.iter().enumerate() {
        for e in events {
            writer
                .write_record(&[
                    frame_idx.to_string(),
                    e.class_id.to_string(),
                    e.azimuth_deg.to_string(),
                    e.elevation_deg.to_string(),
                    e.distance_m.to_string(),
                ])
                .map_err(|e| csv_open_err(path, e))?;
        }
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Bucket a flat event list into per-frame vectors. `num_frames` of `None`
/// sizes the output to the last occupied frame.
pub fn group_by_frame(events: &EventList, num_frames: Option<usize>) -> Vec<Vec<Event>> {
    let n = num_frames.unwrap_or_else(|| events.max_frame().map_or(0, |m| m + 1));
    let mut frames = vec![Vec::new(); n];
    for e in &events.events {
        if e.frame < n {
            frames[e.frame].push(e.clone());
        }
    }
    frames
}

fn csv_open_err(path: &Path, e: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        line: 0,
        reason: e.to_string(),
    }
}

fn csv_err(path: &Path, line: u64, reason: String) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        line,
        reason,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("meta.csv");
        std::fs::write(&path, content).unwrap();
        (dir, path)
    }

    #[test]
    fn centimeter_rows_normalize_to_meters() {
        let (_d, path) = write_tmp("10,1,0,30,-10,150\n");
        let list = read_metadata_csv(&path, DistanceUnit::Centimeters).unwrap();
        assert_eq!(list.len(), 1);
        let e = &list.events[0];
        assert_eq!(e.frame, 10);
        assert_eq!(e.class_id, 1);
        assert_eq!(e.source_id, 0);
        assert_eq!(e.azimuth_deg, 30.0);
        assert_eq!(e.elevation_deg, -10.0);
        assert!((e.distance_m - 1.5).abs() < 1e-12);
    }

    #[test]
    fn empty_file_reads_as_empty_list() {
        let (_d, path) = write_tmp("");
        let list = read_metadata_csv(&path, DistanceUnit::Centimeters).unwrap();
        assert!(list.is_empty());
    }

    #[test]
    fn class_13_rejected() {
        let (_d, path) = write_tmp("0,13,0,0,0,100\n");
        let err = read_metadata_csv(&path, DistanceUnit::Centimeters).unwrap_err();
        assert!(err.to_string().contains("class_id out of range"), "{err}");
    }

    #[test]
    fn bad_angles_and_distances_rejected() {
        let (_d, path) = write_tmp("0,0,0,200,0,100\n");
        assert!(read_metadata_csv(&path, DistanceUnit::Centimeters).is_err());
        let (_d, path) = write_tmp("0,0,0,0,95,100\n");
        assert!(read_metadata_csv(&path, DistanceUnit::Centimeters).is_err());
        let (_d, path) = write_tmp("0,0,0,0,0,-1\n");
        assert!(read_metadata_csv(&path, DistanceUnit::Centimeters).is_err());
        let (_d, path) = write_tmp("0,0,0,abc,0,1\n");
        assert!(read_metadata_csv(&path, DistanceUnit::Centimeters).is_err());
    }

    #[test]
    fn rows_come_back_sorted() {
        let (_d, path) = write_tmp("5,2,1,0,0,100\n1,0,0,10,0,100\n1,0,-1,20,0,100\n");
        let list = read_metadata_csv(&path, DistanceUnit::Centimeters).unwrap();
        let keys: Vec<_> = list
            .events
            .iter()
            .map(|e| (e.frame, e.class_id, e.source_id))
            .collect();
        assert_eq!(keys, vec![(1, 0, -1), (1, 0, 0), (5, 2, 1)]);
    }

    #[test]
    fn metadata_round_trip_in_meters() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let list = EventList::new(vec![Event {
            frame: 3,
            class_id: 7,
            source_id: 2,
            azimuth_deg: -42.5,
            elevation_deg: 13.25,
            distance_m: 2.34,
        }]);
        write_metadata_csv(&path, &list, DistanceUnit::Meters).unwrap();
        let back = read_metadata_csv(&path, DistanceUnit::Meters).unwrap();
        assert_eq!(back, list);
    }

    #[test]
    fn prediction_reader_accepts_both_schemas() {
        let (_d, pred) = write_tmp("0,5,12.5,-3.25,1.75\n");
        let list = read_predictions_csv(&pred, DistanceUnit::Centimeters).unwrap();
        assert_eq!(list.events[0].distance_m, 1.75);

        let (_d2, meta) = write_tmp("0,5,1,12.5,-3.25,175\n");
        let list2 = read_predictions_csv(&meta, DistanceUnit::Centimeters).unwrap();
        assert!((list2.events[0].distance_m - 1.75).abs() < 1e-12);
    }
}
