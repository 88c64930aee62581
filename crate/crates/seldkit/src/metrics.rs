//! Location-and-distance-dependent detection metrics: thresholded F1,
//! DOA error and relative distance error.
//!
//! Matching runs per frame and class: predictions pair with references
//! through the one-to-one assignment minimizing total angular error
//! (exact, not greedy). A matched pair counts as a true positive only if
//! its angular error stays within the angle threshold and its relative
//! distance error `|d_p - d_r| / d_r` within the distance threshold;
//! failing pairs count as both a false positive and a false negative.
//! DOAE and RDE average over all matched pairs regardless of thresholds.

use crate::classes::NUM_CLASSES;
use crate::error::{Error, Result};
use crate::geom::angular_distance_deg;
use crate::io::Event;

#[derive(Debug, Clone, Copy)]
pub struct MatchingConfig {
    pub angle_threshold_deg: f64,
    pub rel_dist_threshold: f64,
}

impl Default for MatchingConfig {
    fn default() -> Self {
        MatchingConfig {
            angle_threshold_deg: 20.0,
            rel_dist_threshold: 1.0,
        }
    }
}

impl MatchingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.angle_threshold_deg > 0.0) || !(self.rel_dist_threshold > 0.0) {
            return Err(Error::InvalidInput(
                "metric thresholds must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Assignment outcome for one (frame, class) cell.
#[derive(Debug, Clone, Default)]
pub struct MatchResult {
    /// (pred index, ref index, angular error in degrees).
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_preds: Vec<usize>,
    pub unmatched_refs: Vec<usize>,
}

/// Largest per-cell side the exact assignment search accepts.
const MAX_ASSIGNMENT: usize = 20;

/// Optimal one-to-one matching between same-class predictions and
/// references of one frame, minimizing the total angular error.
pub fn match_frame(preds: &[Event], refs: &[Event]) -> Result<MatchResult> {
    let np = preds.len();
    let nr = refs.len();
    if np == 0 || nr == 0 {
        return Ok(MatchResult {
            pairs: Vec::new(),
            unmatched_preds: (0..np).collect(),
            unmatched_refs: (0..nr).collect(),
        });
    }
    if np.min(nr) > MAX_ASSIGNMENT {
        return Err(Error::InvalidInput(format!(
            "{np} predictions vs {nr} references in one frame/class exceeds the assignment limit"
        )));
    }

    let cost: Vec<Vec<f64>> = preds
        .iter()
        .map(|p| {
            refs.iter()
                .map(|r| {
                    angular_distance_deg(
                        (p.azimuth_deg, p.elevation_deg),
                        (r.azimuth_deg, r.elevation_deg),
                    )
                })
                .collect()
        })
        .collect();

    // run the subset DP over the smaller side
    let pairs_idx = if np <= nr {
        assign_min_cost(np, nr, |i, j| cost[i][j])
    } else {
        assign_min_cost(nr, np, |i, j| cost[j][i])
            .into_iter()
            .map(|(r, p)| (p, r))
            .collect()
    };

    let mut matched_p = vec![false; np];
    let mut matched_r = vec![false; nr];
    let mut pairs = Vec::with_capacity(pairs_idx.len());
    for (p, r) in pairs_idx {
        matched_p[p] = true;
        matched_r[r] = true;
        pairs.push((p, r, cost[p][r]));
    }
    pairs.sort_by_key(|&(p, _, _)| p);
    Ok(MatchResult {
        pairs,
        unmatched_preds: (0..np).filter(|&i| !matched_p[i]).collect(),
        unmatched_refs: (0..nr).filter(|&i| !matched_r[i]).collect(),
    })
}

/// Exact min-cost assignment of all `n_small` items to distinct partners
/// out of `n_large` (`n_small <= n_large`). Dynamic programming over
/// subsets of the small side: process large items in order and track, per
/// subset of covered small items, the cheapest way a prefix of large
/// items can cover it.
fn assign_min_cost(
    n_small: usize,
    n_large: usize,
    cost: impl Fn(usize, usize) -> f64,
) -> Vec<(usize, usize)> {
    let full = 1usize << n_small;
    // cost per state plus, for reconstruction, the small item each large
    // item took on the best path (u8::MAX = skipped)
    let mut states: Vec<(f64, Vec<u8>)> = vec![(f64::INFINITY, Vec::new()); full];
    states[0] = (0.0, Vec::new());

    for j in 0..n_large {
        let mut next: Vec<(f64, Vec<u8>)> = vec![(f64::INFINITY, Vec::new()); full];
        for (mask, (c, path)) in states.iter().enumerate() {
            if !c.is_finite() {
                continue;
            }
            if *c < next[mask].0 {
                let mut p = path.clone();
                p.push(u8::MAX);
                next[mask] = (*c, p);
            }
            for i in 0..n_small {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let nc = c + cost(i, j);
                let nmask = mask | (1 << i);
                if nc < next[nmask].0 {
                    let mut p = path.clone();
                    p.push(i as u8);
                    next[nmask] = (nc, p);
                }
            }
        }
        states = next;
    }

    let (_, path) = &states[full - 1];
    path.iter()
        .enumerate()
        .filter(|(_, &i)| i != u8::MAX)
        .map(|(j, &i)| (i as usize, j))
        .collect()
}

/// Per-class tallies and error means.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub class_id: usize,
    pub tp: usize,
    pub fp: usize,
    pub fn_count: usize,
    pub num_refs: usize,
    pub num_matched: usize,
    /// Mean angular error over matched pairs; absent with no pairs.
    pub doae_deg: Option<f64>,
    /// Mean relative distance error over matched pairs.
    pub rde: Option<f64>,
}

impl ClassReport {
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_count;
        if denom == 0 {
            0.0
        } else {
            2.0 * self.tp as f64 / denom as f64
        }
    }
}

/// Macro-averaged evaluation triplet plus the per-class breakdown.
#[derive(Debug, Clone)]
pub struct EvalReport {
    /// Macro F1 over classes with at least one reference.
    pub f1: f64,
    /// Macro DOAE over classes with at least one matched pair.
    pub doae_deg: f64,
    /// Macro RDE over classes with at least one matched pair.
    pub rde: f64,
    pub per_class: Vec<ClassReport>,
}

/// Evaluate aligned per-frame predictions against references.
pub fn evaluate(
    preds: &[Vec<Event>],
    refs: &[Vec<Event>],
    cfg: &MatchingConfig,
) -> Result<EvalReport> {
    cfg.validate()?;
    if preds.len() != refs.len() {
        return Err(Error::Shape(format!(
            "prediction frames ({}) != reference frames ({})",
            preds.len(),
            refs.len()
        )));
    }

    struct Tally {
        tp: usize,
        fp: usize,
        fn_count: usize,
        num_refs: usize,
        matched: usize,
        doae_sum: f64,
        rde_sum: f64,
    }
    let mut tallies: Vec<Tally> = (0..NUM_CLASSES)
        .map(|_| Tally {
            tp: 0,
            fp: 0,
            fn_count: 0,
            num_refs: 0,
            matched: 0,
            doae_sum: 0.0,
            rde_sum: 0.0,
        })
        .collect();

    for (frame_preds, frame_refs) in preds.iter().zip(refs) {
        for class_id in 0..NUM_CLASSES {
            let p: Vec<Event> = frame_preds
                .iter()
                .filter(|e| e.class_id == class_id)
                .cloned()
                .collect();
            let r: Vec<Event> = frame_refs
                .iter()
                .filter(|e| e.class_id == class_id)
                .cloned()
                .collect();
            if p.is_empty() && r.is_empty() {
                continue;
            }
            for e in &r {
                if !(e.distance_m > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "reference distance must be positive, frame {} class {class_id}",
                        e.frame
                    )));
                }
            }
            let t = &mut tallies[class_id];
            t.num_refs += r.len();

            let m = match_frame(&p, &r)?;
            t.fp += m.unmatched_preds.len();
            t.fn_count += m.unmatched_refs.len();
            for &(pi, ri, ang) in &m.pairs {
                let rel = (p[pi].distance_m - r[ri].distance_m).abs() / r[ri].distance_m;
                t.matched += 1;
                t.doae_sum += ang;
                t.rde_sum += rel;
                if ang <= cfg.angle_threshold_deg && rel <= cfg.rel_dist_threshold {
                    t.tp += 1;
                } else {
                    t.fp += 1;
                    t.fn_count += 1;
                }
            }
        }
    }

    let per_class: Vec<ClassReport> = tallies
        .iter()
        .enumerate()
        .map(|(class_id, t)| ClassReport {
            class_id,
            tp: t.tp,
            fp: t.fp,
            fn_count: t.fn_count,
            num_refs: t.num_refs,
            num_matched: t.matched,
            doae_deg: (t.matched > 0).then(|| t.doae_sum / t.matched as f64),
            rde: (t.matched > 0).then(|| t.rde_sum / t.matched as f64),
        })
        .collect();

    let f1_classes: Vec<f64> = per_class
        .iter()
        .filter(|c| c.num_refs > 0)
        .map(|c| c.f1())
        .collect();
    let doae_classes: Vec<f64> = per_class.iter().filter_map(|c| c.doae_deg).collect();
    let rde_classes: Vec<f64> = per_class.iter().filter_map(|c| c.rde).collect();
    let mean = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };

    Ok(EvalReport {
        f1: mean(&f1_classes),
        doae_deg: mean(&doae_classes),
        rde: mean(&rde_classes),
        per_class,
    })
}

pub use crate::geom::angular_distance_deg as angular_distance;
