//! Audio channel swap: the 8 signed permutations of the FOA dipole
//! channels realizing azimuth reflections, 90-degree rotations and
//! elevation flips, with matching label remapping.

use crate::clip::{FoaClip, ACN_W, ACN_X, ACN_Y, ACN_Z};
use crate::geom::wrap_azimuth_deg;
use crate::io::{Event, EventList};

/// A dipole channel referenced by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dipole {
    X,
    Y,
    Z,
}

impl Dipole {
    fn acn_index(self) -> usize {
        match self {
            Dipole::X => ACN_X,
            Dipole::Y => ACN_Y,
            Dipole::Z => ACN_Z,
        }
    }
}

/// Signed permutation of the (X, Y, Z) dipoles; W always passes through.
#[derive(Debug, Clone, Copy)]
pub struct ChannelOp {
    pub x: (Dipole, f64),
    pub y: (Dipole, f64),
    pub z: (Dipole, f64),
}

/// One of the 8 channel-swap transforms. The azimuth map is
/// `wrap(sign * az + offset)` and the elevation map `el` or `-el`; the
/// channel op is the signed permutation that realizes exactly that
/// direction change on plane waves.
#[derive(Debug, Clone, Copy)]
pub struct AcsTransform {
    pub id: u8,
    pub azimuth_sign: f64,
    pub azimuth_offset_deg: f64,
    pub elevation_sign: f64,
    pub channel_op: ChannelOp,
}

impl AcsTransform {
    /// Apply the angle maps to one direction.
    pub fn map_angles(&self, az_deg: f64, el_deg: f64) -> (f64, f64) {
        (
            wrap_azimuth_deg(self.azimuth_sign * az_deg + self.azimuth_offset_deg),
            self.elevation_sign * el_deg,
        )
    }
}

use Dipole::{X, Y, Z};

/// The 8 transforms, one per combination of azimuth map
/// {phi-90, -phi-90, phi, -phi, phi+90, -phi+90, phi+180, -phi+180}
/// and the elevation flip that keeps the set closed.
pub fn acs_table() -> [AcsTransform; 8] {
    let t = |id, s_az: f64, off: f64, s_el: f64, x, y, z| AcsTransform {
        id,
        azimuth_sign: s_az,
        azimuth_offset_deg: off,
        elevation_sign: s_el,
        channel_op: ChannelOp { x, y, z },
    };
    [
        t(0, 1.0, -90.0, -1.0, (Y, 1.0), (X, -1.0), (Z, -1.0)),
        t(1, -1.0, -90.0, 1.0, (Y, -1.0), (X, -1.0), (Z, 1.0)),
        t(2, 1.0, 0.0, 1.0, (X, 1.0), (Y, 1.0), (Z, 1.0)),
        t(3, -1.0, 0.0, -1.0, (X, 1.0), (Y, -1.0), (Z, -1.0)),
        t(4, 1.0, 90.0, -1.0, (Y, -1.0), (X, 1.0), (Z, -1.0)),
        t(5, -1.0, 90.0, 1.0, (Y, 1.0), (X, 1.0), (Z, 1.0)),
        t(6, 1.0, 180.0, 1.0, (X, -1.0), (Y, -1.0), (Z, 1.0)),
        t(7, -1.0, 180.0, -1.0, (X, -1.0), (Y, 1.0), (Z, -1.0)),
    ]
}

/// Apply the signed channel permutation to a clip. W is untouched.
pub fn acs_audio(clip: &FoaClip, t: &AcsTransform) -> FoaClip {
    let src = clip.acn_channels();
    let apply = |(dipole, sign): (Dipole, f64)| -> Vec<f64> {
        src[dipole.acn_index()].iter().map(|v| sign * v).collect()
    };
    let mut channels: [Vec<f64>; 4] = Default::default();
    channels[ACN_W] = src[ACN_W].clone();
    channels[ACN_X] = apply(t.channel_op.x);
    channels[ACN_Y] = apply(t.channel_op.y);
    channels[ACN_Z] = apply(t.channel_op.z);
    FoaClip::from_acn_channels(channels, clip.sample_rate())
        .expect("signed permutation preserves clip validity")
}

/// Remap event directions. Class, frame, source and distance pass through.
pub fn acs_labels(events: &EventList, t: &AcsTransform) -> EventList {
    let mapped: Vec<Event> = events
        .events
        .iter()
        .map(|e| {
            let (az, el) = t.map_angles(e.azimuth_deg, e.elevation_deg);
            Event {
                azimuth_deg: az,
                elevation_deg: el,
                ..e.clone()
            }
        })
        .collect();
    EventList::new(mapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{plane_wave_foa, SignalKind, SourceSpec};

    fn plane(az: f64, el: f64) -> FoaClip {
        plane_wave_foa(
            &SourceSpec {
                azimuth_deg: az,
                elevation_deg: el,
                distance_m: 1.0,
                signal: SignalKind::WhiteNoise { seed: 7 },
                reverb: None,
            },
            0.1,
            24000,
        )
    }

    fn max_abs_diff(a: &FoaClip, b: &FoaClip) -> f64 {
        a.acn_channels()
            .iter()
            .zip(b.acn_channels())
            .flat_map(|(ca, cb)| ca.iter().zip(cb).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    #[test]
    fn id2_is_the_identity() {
        let t = acs_table()[2];
        let clip = plane(33.0, -21.0);
        let out = acs_audio(&clip, &t);
        assert_eq!(out.acn_channels(), clip.acn_channels());
        let (az, el) = t.map_angles(77.0, 12.0);
        assert_eq!((az, el), (77.0, 12.0));
    }

    #[test]
    fn id0_formula_case() {
        let t = acs_table()[0];
        assert_eq!(t.map_angles(30.0, 10.0), (-60.0, -10.0));
    }

    #[test]
    fn id6_wraps_azimuth() {
        let t = acs_table()[6];
        let (az, el) = t.map_angles(170.0, 0.0);
        assert_eq!((az, el), (-10.0, 0.0));
    }

    #[test]
    fn audio_and_labels_stay_consistent_on_a_grid() {
        for t in acs_table() {
            for az in (-150..180).step_by(60) {
                for el in (-60..=60).step_by(30) {
                    let (m_az, m_el) = t.map_angles(az as f64, el as f64);
                    let swapped = acs_audio(&plane(az as f64, el as f64), &t);
                    let direct = plane(m_az, m_el);
                    let err = max_abs_diff(&swapped, &direct);
                    assert!(
                        err < 1e-6,
                        "transform {} at ({az}, {el}): max err {err}",
                        t.id
                    );
                }
            }
        }
    }

    #[test]
    fn omni_channel_is_untouched() {
        let clip = plane(12.0, 34.0);
        for t in acs_table() {
            let out = acs_audio(&clip, &t);
            assert_eq!(out.w(), clip.w(), "transform {}", t.id);
        }
    }

    #[test]
    fn dipole_energy_is_conserved() {
        let clip = plane(25.0, 40.0);
        let energy = |c: &[f64]| c.iter().map(|v| v * v).sum::<f64>();
        let total = energy(clip.x()) + energy(clip.y()) + energy(clip.z());
        for t in acs_table() {
            let out = acs_audio(&clip, &t);
            let got = energy(out.x()) + energy(out.y()) + energy(out.z());
            assert!((got - total).abs() < 1e-9 * total, "transform {}", t.id);
        }
    }

    #[test]
    fn every_transform_has_an_inverse_in_the_set() {
        let table = acs_table();
        for t in table {
            let inverse = table.iter().find(|u| {
                (-170..180).step_by(10).all(|az| {
                    (-80..=80).step_by(10).all(|el| {
                        let (a1, e1) = t.map_angles(az as f64, el as f64);
                        let (a2, e2) = u.map_angles(a1, e1);
                        (a2 - az as f64).abs() < 1e-9 && (e2 - el as f64).abs() < 1e-9
                    })
                })
            });
            let inverse = inverse.unwrap_or_else(|| panic!("no inverse for {}", t.id));

            // applying t then its inverse to audio must reproduce the input
            let clip = plane(47.0, -13.0);
            let round = acs_audio(&acs_audio(&clip, &t), inverse);
            assert!(max_abs_diff(&round, &clip) < 1e-12, "transform {}", t.id);
        }
    }

    #[test]
    fn labels_keep_metadata_fields() {
        let events = EventList::new(vec![Event {
            frame: 4,
            class_id: 9,
            source_id: 3,
            azimuth_deg: 30.0,
            elevation_deg: 10.0,
            distance_m: 2.5,
        }]);
        let out = acs_labels(&events, &acs_table()[0]);
        let e = &out.events[0];
        assert_eq!(
            (e.frame, e.class_id, e.source_id, e.distance_m),
            (4, 9, 3, 2.5)
        );
        assert_eq!((e.azimuth_deg, e.elevation_deg), (-60.0, -10.0));
    }
}
