//! Equirectangular to horizontal-cubemap conversion and the direction
//! mappings between the two representations.
//!
//! Only the four horizontal faces are kept, concatenated left-front-
//! right-back so neighboring faces share continuous azimuth boundaries;
//! each face is a 90-degree-FOV gnomonic view at elevation zero. Converting
//! a 448x224 frame at the default face size yields an 896x224 strip.

use image::{ImageBuffer, Pixel};

use crate::augment::angles_to_pixel_continuous;
use crate::error::{Error, Result};
use crate::geom::wrap_azimuth_deg;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const DEFAULT_FACE_SIZE: u32 = 224;

/// Horizontal cube faces in strip order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    Left,
    Front,
    Right,
    Back,
}

pub const FACE_ORDER: [Face; 4] = [Face::Left, Face::Front, Face::Right, Face::Back];

impl Face {
    pub fn index(self) -> usize {
        match self {
            Face::Left => 0,
            Face::Front => 1,
            Face::Right => 2,
            Face::Back => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Face> {
        FACE_ORDER.get(i).copied()
    }

    /// Azimuth of the face center in degrees.
    pub fn center_azimuth_deg(self) -> f64 {
        match self {
            Face::Left => 90.0,
            Face::Front => 0.0,
            Face::Right => -90.0,
            Face::Back => 180.0,
        }
    }
}

/// Map a direction onto a horizontal face. Returns the face whose
/// 90-degree azimuth sector contains the direction plus gnomonic (u, v)
/// in `[0, 1)`, or `None` when the direction exits through the removed
/// top/bottom faces.
pub fn dir_to_cubemap(az_deg: f64, el_deg: f64) -> Option<(Face, f64, f64)> {
    let az = wrap_azimuth_deg(az_deg);
    let face = *FACE_ORDER
        .iter()
        .find(|f| {
            let d = wrap_azimuth_deg(az - f.center_azimuth_deg());
            d > -45.0 && d <= 45.0
        })
        .expect("sectors tile the circle");

    let d = wrap_azimuth_deg(az - face.center_azimuth_deg()).to_radians();
    // u grows to the right of the face image, i.e. with decreasing azimuth
    let u_lin = -d.tan();
    let v_lin = -el_deg.to_radians().tan() / d.cos();
    if !(-1.0..1.0).contains(&v_lin) {
        return None;
    }
    Some((face, (u_lin + 1.0) / 2.0, (v_lin + 1.0) / 2.0))
}

/// Exact inverse of `dir_to_cubemap` on its image.
pub fn cubemap_to_dir(face: Face, u: f64, v: f64) -> (f64, f64) {
    let u_lin = 2.0 * u - 1.0;
    let v_lin = 2.0 * v - 1.0;
    let d = (-u_lin).atan();
    let el = (-v_lin * d.cos()).atan();
    let az = wrap_azimuth_deg(face.center_azimuth_deg() + d.to_degrees());
    (az, el.to_degrees())
}

/// Convert an equirectangular frame into the 4-face horizontal strip by
/// bilinear sampling (horizontal wraparound, vertical clamp). Works on RGB
/// frames and single-channel depth maps alike.
pub fn equirect_to_cubemap<P>(
    img: &ImageBuffer<P, Vec<u8>>,
    face_size: u32,
) -> Result<ImageBuffer<P, Vec<u8>>>
where
    P: Pixel<Subpixel = u8> + Sync + 'static,
{
    let (width, height) = img.dimensions();
    if width != 2 * height {
        return Err(Error::Image(format!(
            "expected a 2:1 equirectangular frame, got {width}x{height}"
        )));
    }
    if face_size == 0 {
        return Err(Error::Image("face size must be positive".into()));
    }

    let strip_w = 4 * face_size;
    let n_ch = P::CHANNEL_COUNT as usize;
    let mut rows: Vec<Vec<u8>> = vec![Vec::new(); face_size as usize];

    let render_row = |py: usize, row: &mut Vec<u8>| {
        row.resize(strip_w as usize * n_ch, 0);
        for face_idx in 0..4 {
            let face = FACE_ORDER[face_idx];
            for px in 0..face_size {
                let u = (px as f64 + 0.5) / face_size as f64;
                let v = (py as f64 + 0.5) / face_size as f64;
                let (az, el) = cubemap_to_dir(face, u, v);
                let (sx, sy) = angles_to_pixel_continuous(az, el, width, height);
                let mut value = [0.0f64; 4];
                sample_bilinear(img, sx, sy, &mut value[..n_ch]);
                let out = (face_idx as u32 * face_size + px) as usize * n_ch;
                for c in 0..n_ch {
                    row[out + c] = value[c].round().clamp(0.0, 255.0) as u8;
                }
            }
        }
    };

    #[cfg(feature = "parallel")]
    rows.par_iter_mut()
        .enumerate()
        .for_each(|(py, row)| render_row(py, row));
    #[cfg(not(feature = "parallel"))]
    rows.iter_mut()
        .enumerate()
        .for_each(|(py, row)| render_row(py, row));

    let mut raw = Vec::with_capacity((strip_w * face_size) as usize * n_ch);
    for row in rows {
        raw.extend_from_slice(&row);
    }
    ImageBuffer::from_raw(strip_w, face_size, raw)
        .ok_or_else(|| Error::Image("strip buffer size mismatch".into()))
}

/// Bilinear sample at continuous pixel coordinates with horizontal wrap
/// and vertical clamp.
fn sample_bilinear<P>(img: &ImageBuffer<P, Vec<u8>>, x: f64, y: f64, out: &mut [f64])
where
    P: Pixel<Subpixel = u8> + 'static,
{
    let (width, height) = img.dimensions();
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;

    let wrap = |c: i64| c.rem_euclid(width as i64) as u32;
    let clamp = |r: i64| r.clamp(0, height as i64 - 1) as u32;
    let (x0i, x1i) = (wrap(x0 as i64), wrap(x0 as i64 + 1));
    let (y0i, y1i) = (clamp(y0 as i64), clamp(y0 as i64 + 1));

    let p00 = img.get_pixel(x0i, y0i).channels();
    let p10 = img.get_pixel(x1i, y0i).channels();
    let p01 = img.get_pixel(x0i, y1i).channels();
    let p11 = img.get_pixel(x1i, y1i).channels();
    for (c, o) in out.iter_mut().enumerate() {
        let top = p00[c] as f64 * (1.0 - fx) + p10[c] as f64 * fx;
        let bottom = p01[c] as f64 * (1.0 - fx) + p11[c] as f64 * fx;
        *o = top * (1.0 - fy) + bottom * fy;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::RgbImage;

    #[test]
    fn face_centers_map_to_face_middles() {
        let (face, u, v) = dir_to_cubemap(0.0, 0.0).unwrap();
        assert_eq!(face, Face::Front);
        assert!((u - 0.5).abs() < 1e-12 && (v - 0.5).abs() < 1e-12);

        let (face, u, v) = dir_to_cubemap(90.0, 0.0).unwrap();
        assert_eq!(face, Face::Left);
        assert!((u - 0.5).abs() < 1e-12 && (v - 0.5).abs() < 1e-12);

        let (face, _, _) = dir_to_cubemap(180.0, 0.0).unwrap();
        assert_eq!(face, Face::Back);
        let (face, _, _) = dir_to_cubemap(-90.0, 0.0).unwrap();
        assert_eq!(face, Face::Right);
    }

    #[test]
    fn steep_elevations_exit_through_removed_faces() {
        assert!(dir_to_cubemap(0.0, 60.0).is_none());
        assert!(dir_to_cubemap(0.0, -60.0).is_none());
        // the face-center bound is 45 degrees and shrinks toward the
        // azimuth edges, reaching atan(cos 45) = 35.26 at a face corner
        assert!(dir_to_cubemap(0.0, 44.9).is_some());
        assert!(dir_to_cubemap(0.0, 45.1).is_none());
        assert!(dir_to_cubemap(44.0, 35.0).is_some());
        assert!(dir_to_cubemap(44.0, 36.0).is_none());
    }

    #[test]
    fn face_edge_approaches_minus_45() {
        let (az, el) = cubemap_to_dir(Face::Front, 1.0 - 1e-9, 0.5);
        assert!((az + 45.0).abs() < 1e-6, "az {az}");
        assert!(el.abs() < 1e-9);
    }

    #[test]
    fn round_trip_is_exact_within_40_degrees() {
        let mut max_err = 0.0f64;
        for az in (-180i32..180).step_by(5) {
            for el in (-40i32..=40).step_by(5) {
                // near face corners directions above atan(cos 45) leave
                // the horizontal band; everything that maps must invert
                let Some((face, u, v)) = dir_to_cubemap(az as f64, el as f64) else {
                    assert!(el.abs() > 35, "({az}, {el}) should be on a face");
                    continue;
                };
                let (az2, el2) = cubemap_to_dir(face, u, v);
                let err = crate::geom::angular_distance_deg(
                    (az as f64, el as f64),
                    (az2, el2),
                );
                max_err = max_err.max(err);
            }
        }
        assert!(max_err < 1e-9, "round trip error {max_err} deg");
    }

    #[test]
    fn strip_neighbors_share_azimuth_boundaries() {
        // right edge of each face meets the left edge of the next
        for i in 0..4 {
            let a = cubemap_to_dir(FACE_ORDER[i], 1.0 - 1e-12, 0.5).0;
            let b = cubemap_to_dir(FACE_ORDER[(i + 1) % 4], 0.0, 0.5).0;
            assert!(
                (wrap_azimuth_deg(a - b)).abs() < 1e-6,
                "faces {i} and {}: {a} vs {b}",
                (i + 1) % 4
            );
        }
    }

    #[test]
    fn constant_image_converts_to_constant_strip() {
        let img = RgbImage::from_pixel(448, 224, image::Rgb([17, 130, 201]));
        let strip = equirect_to_cubemap(&img, DEFAULT_FACE_SIZE).unwrap();
        assert_eq!(strip.dimensions(), (896, 224));
        assert!(strip.pixels().all(|p| p.0 == [17, 130, 201]));
    }

    #[test]
    fn bad_aspect_ratio_is_rejected() {
        let img = RgbImage::new(448, 225);
        assert!(equirect_to_cubemap(&img, 224).is_err());
    }

    #[test]
    fn bilinear_is_exact_on_affine_images() {
        // value = 2*col + 3*row, affine in source pixel coordinates
        let mut img = image::GrayImage::new(64, 32);
        for r in 0..32 {
            for c in 0..64 {
                img.put_pixel(c, r, image::Luma([(2 * c + 3 * r) as u8]));
            }
        }
        for &(x, y) in &[(10.25, 5.5), (3.75, 20.0), (40.5, 0.5)] {
            let mut out = [0.0];
            sample_bilinear(&img, x, y, &mut out);
            assert!((out[0] - (2.0 * x + 3.0 * y)).abs() < 1e-9, "at ({x},{y})");
        }
    }

    #[test]
    fn gradient_face_centers_match_analytic_values() {
        // smooth field keyed to azimuth, continuous across the wrap
        let value_at = |az: f64| 128.0 + 100.0 * az.to_radians().sin();
        let (w, h) = (448u32, 224u32);
        let mut img = image::GrayImage::new(w, h);
        for c in 0..w {
            for r in 0..h {
                let (az, _) = crate::augment::pixel_to_angles(c, r, w, h);
                img.put_pixel(c, r, image::Luma([value_at(az).round() as u8]));
            }
        }
        let strip = equirect_to_cubemap(&img, 224).unwrap();
        for (i, face) in FACE_ORDER.iter().enumerate() {
            // the two central strip pixels straddle the face center
            for px in [111u32, 112u32] {
                let u = (px as f64 + 0.5) / 224.0;
                let (az, _) = cubemap_to_dir(*face, u, 0.5);
                let got = strip.get_pixel(i as u32 * 224 + px, 111).0[0] as f64;
                assert!(
                    (got - value_at(az)).abs() <= 1.0,
                    "face {i} px {px}: {got} vs {}",
                    value_at(az)
                );
            }
        }
    }

    #[test]
    fn painted_disk_lands_where_the_direction_maps() {
        let (w, h) = (448u32, 224u32);
        for &(az, el) in &[(20.0, 10.0), (-75.0, -25.0), (160.0, 30.0), (95.0, 0.0)] {
            let mut img = image::GrayImage::new(w, h);
            let (cx, cy) = crate::augment::angles_to_pixel(az, el, w, h);
            for dc in -2i64..=2 {
                for dr in -2i64..=2 {
                    if dc * dc + dr * dr <= 4 {
                        let c = (cx as i64 + dc).rem_euclid(w as i64) as u32;
                        let r = (cy as i64 + dr).clamp(0, h as i64 - 1) as u32;
                        img.put_pixel(c, r, image::Luma([255]));
                    }
                }
            }
            let strip = equirect_to_cubemap(&img, 224).unwrap();

            // intensity centroid in strip coordinates
            let (mut sx, mut sy, mut total) = (0.0f64, 0.0f64, 0.0f64);
            for (x, y, p) in strip.enumerate_pixels() {
                let v = p.0[0] as f64;
                sx += v * x as f64;
                sy += v * y as f64;
                total += v;
            }
            assert!(total > 0.0, "disk vanished for ({az},{el})");
            let (gx, gy) = (sx / total, sy / total);

            let (face, u, v) = dir_to_cubemap(az, el).unwrap();
            let ex = face.index() as f64 * 224.0 + u * 224.0 - 0.5;
            let ey = v * 224.0 - 0.5;
            let err = ((gx - ex).powi(2) + (gy - ey).powi(2)).sqrt();
            assert!(err < 1.5, "({az}, {el}): centroid {err:.3} px off");
        }
    }
}
