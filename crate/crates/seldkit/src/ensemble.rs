//! Spatially-thresholded majority-vote fusion of multiple prediction
//! sources: overlapping inference windows (temporal ensemble) or separate
//! models (model ensemble with per-class exceptions).

use std::collections::BTreeSet;

use crate::classes::NUM_CLASSES;
use crate::error::{Error, Result};
use crate::geom::{angular_distance_vec_deg, normalize3, unit_vec_deg, vec_to_angles_deg};
use crate::io::Event;

/// Guard against ties at the exact threshold produced by renormalized
/// centroid arithmetic; a detection sitting analytically on the boundary
/// still joins.
const ANGLE_EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub angle_threshold_deg: f64,
    pub min_votes: usize,
    pub exception_classes: BTreeSet<usize>,
    pub exception_min_votes: usize,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            angle_threshold_deg: 15.0,
            min_votes: 2,
            exception_classes: BTreeSet::new(),
            exception_min_votes: 1,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.min_votes) {
            return Err(Error::InvalidInput("min_votes must be in 1..=3".into()));
        }
        if self.exception_min_votes > self.min_votes || self.exception_min_votes == 0 {
            return Err(Error::InvalidInput(
                "exception_min_votes must be in 1..=min_votes".into(),
            ));
        }
        if !(self.angle_threshold_deg > 0.0) {
            return Err(Error::InvalidInput(
                "ensemble angle threshold must be positive".into(),
            ));
        }
        if self.exception_classes.iter().any(|&c| c >= NUM_CLASSES) {
            return Err(Error::InvalidInput("exception class id out of range".into()));
        }
        Ok(())
    }
}

/// A group of related same-class detections from distinct sources.
#[derive(Debug, Clone)]
pub struct Cluster {
    /// (source index, detection) pairs; at most one per source.
    pub members: Vec<(usize, Event)>,
    pub centroid: [f64; 3],
}

impl Cluster {
    pub fn votes(&self) -> usize {
        self.members
            .iter()
            .map(|(s, _)| *s)
            .collect::<BTreeSet<_>>()
            .len()
    }

    fn sources(&self) -> BTreeSet<usize> {
        self.members.iter().map(|(s, _)| *s).collect()
    }

    fn recompute_centroid(&mut self) {
        let mut m = [0.0f64; 3];
        for (_, e) in &self.members {
            let v = unit_vec_deg(e.azimuth_deg, e.elevation_deg);
            m[0] += v[0];
            m[1] += v[1];
            m[2] += v[2];
        }
        let n = self.members.len() as f64;
        let mean = [m[0] / n, m[1] / n, m[2] / n];
        self.centroid = normalize3(mean).unwrap_or([1.0, 0.0, 0.0]);
    }

    /// Fused event: component-wise mean of the members' unit vectors
    /// (renormalized for the angle output) and mean distance.
    fn fused_event(&self, frame: usize, class_id: usize) -> Event {
        let n = self.members.len() as f64;
        let mut m = [0.0f64; 3];
        let mut dist = 0.0;
        for (_, e) in &self.members {
            let v = unit_vec_deg(e.azimuth_deg, e.elevation_deg);
            m[0] += v[0];
            m[1] += v[1];
            m[2] += v[2];
            dist += e.distance_m;
        }
        let dir = normalize3([m[0] / n, m[1] / n, m[2] / n]).unwrap_or([1.0, 0.0, 0.0]);
        let (az, el) = vec_to_angles_deg(dir);
        Event {
            frame,
            class_id,
            source_id: 0,
            azimuth_deg: az,
            elevation_deg: el,
            distance_m: dist / n,
        }
    }
}

/// Greedy agglomeration of same-class detections: seed with the closest
/// cross-source pair under the threshold, then repeatedly attach the
/// nearest unassigned detection from a source not yet in the cluster,
/// measured against the running centroid. Leftovers become singletons.
pub fn cluster_detections(detections: &[(usize, Event)], angle_threshold_deg: f64) -> Vec<Cluster> {
    let dirs: Vec<[f64; 3]> = detections
        .iter()
        .map(|(_, e)| unit_vec_deg(e.azimuth_deg, e.elevation_deg))
        .collect();
    let mut assigned = vec![false; detections.len()];
    let mut clusters = Vec::new();
    let threshold = angle_threshold_deg + ANGLE_EPS;

    loop {
        // closest unassigned cross-source pair below the threshold
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..detections.len() {
            if assigned[i] {
                continue;
            }
            for j in i + 1..detections.len() {
                if assigned[j] || detections[i].0 == detections[j].0 {
                    continue;
                }
                let d = angular_distance_vec_deg(dirs[i], dirs[j]);
                if d <= threshold && best.map_or(true, |(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
        let Some((_, i, j)) = best else { break };

        let mut cluster = Cluster {
            members: vec![(detections[i].0, detections[i].1.clone())],
            centroid: dirs[i],
        };
        assigned[i] = true;
        cluster.members.push((detections[j].0, detections[j].1.clone()));
        assigned[j] = true;
        cluster.recompute_centroid();

        // attach remaining sources' nearest detections to the centroid
        loop {
            let in_cluster = cluster.sources();
            let mut next: Option<(f64, usize)> = None;
            for (k, det) in detections.iter().enumerate() {
                if assigned[k] || in_cluster.contains(&det.0) {
                    continue;
                }
                let d = angular_distance_vec_deg(cluster.centroid, dirs[k]);
                if d <= threshold && next.map_or(true, |(bd, _)| d < bd) {
                    next = Some((d, k));
                }
            }
            let Some((_, k)) = next else { break };
            cluster.members.push((detections[k].0, detections[k].1.clone()));
            assigned[k] = true;
            cluster.recompute_centroid();
        }
        clusters.push(cluster);
    }

    for (k, det) in detections.iter().enumerate() {
        if !assigned[k] {
            clusters.push(Cluster {
                members: vec![(det.0, det.1.clone())],
                centroid: dirs[k],
            });
        }
    }
    clusters
}

/// Fuse the per-source detections of one frame. `sources` holds only the
/// sources actually covering the frame; with fewer than 3 available the
/// vote requirement falls back to a majority of what is available.
pub fn fuse_frame(sources: &[&[Event]], frame: usize, cfg: &EnsembleConfig) -> Vec<Event> {
    let avail = sources.len();
    if avail == 0 {
        return Vec::new();
    }
    let base_votes = if avail >= 3 {
        cfg.min_votes
    } else {
        avail / 2 + 1
    };

    let mut out = Vec::new();
    for class_id in 0..NUM_CLASSES {
        let detections: Vec<(usize, Event)> = sources
            .iter()
            .enumerate()
            .flat_map(|(s, events)| {
                events
                    .iter()
                    .filter(|e| e.class_id == class_id)
                    .map(move |e| (s, e.clone()))
            })
            .collect();
        if detections.is_empty() {
            continue;
        }
        let required = if cfg.exception_classes.contains(&class_id) {
            cfg.exception_min_votes
        } else {
            base_votes
        };
        for cluster in cluster_detections(&detections, cfg.angle_threshold_deg) {
            if cluster.votes() >= required {
                out.push(cluster.fused_event(frame, class_id));
            }
        }
    }
    out
}

/// Decoded predictions of one inference window, aligned to absolute label
/// frames by `start_frame`.
#[derive(Debug, Clone)]
pub struct ChunkPrediction {
    pub start_frame: usize,
    pub frames: Vec<Vec<Event>>,
}

/// Temporal ensemble over sliding-window predictions. Each absolute frame
/// is fused from every window covering it.
pub fn fuse_temporal(chunks: &[ChunkPrediction], cfg: &EnsembleConfig) -> Result<Vec<Vec<Event>>> {
    cfg.validate()?;
    if chunks.is_empty() {
        return Ok(Vec::new());
    }
    let total = chunks
        .iter()
        .map(|c| c.start_frame + c.frames.len())
        .max()
        .unwrap();

    let mut fused = Vec::with_capacity(total);
    for frame in 0..total {
        let covering: Vec<&[Event]> = chunks
            .iter()
            .filter(|c| frame >= c.start_frame && frame < c.start_frame + c.frames.len())
            .map(|c| c.frames[frame - c.start_frame].as_slice())
            .collect();
        fused.push(fuse_frame(&covering, frame, cfg));
    }
    Ok(fused)
}

/// Cross-model ensemble over aligned per-frame predictions; exception
/// classes need only `exception_min_votes` (typically a single model).
pub fn fuse_models(models: &[Vec<Vec<Event>>], cfg: &EnsembleConfig) -> Result<Vec<Vec<Event>>> {
    cfg.validate()?;
    if models.is_empty() {
        return Ok(Vec::new());
    }
    let len = models[0].len();
    if models.iter().any(|m| m.len() != len) {
        return Err(Error::Shape(
            "model predictions cover different frame counts".into(),
        ));
    }
    let mut fused = Vec::with_capacity(len);
    for frame in 0..len {
        let sources: Vec<&[Event]> = models.iter().map(|m| m[frame].as_slice()).collect();
        fused.push(fuse_frame(&sources, frame, cfg));
    }
    Ok(fused)
}
