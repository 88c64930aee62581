//! Equirectangular frame transforms matching the audio channel swaps.
//!
//! The pixel <-> angle convention used everywhere in the toolkit: column
//! `c` of a width-W frame is centered on azimuth `180 - 360*(c+0.5)/W`
//! (image center at azimuth 0, left half positive, i.e. counter-clockwise
//! azimuth), and row `r` of a height-H frame on elevation
//! `90 - 180*(r+0.5)/H`. Under this convention every transform is an
//! exact pixel move: an optional horizontal flip, a circular column
//! shift, and an optional vertical flip.

use image::{ImageBuffer, Pixel};

use crate::augment::acs::AcsTransform;
use crate::error::{Error, Result};
use crate::geom::wrap_azimuth_deg;

/// Angles at the center of pixel (col, row).
pub fn pixel_to_angles(col: u32, row: u32, width: u32, height: u32) -> (f64, f64) {
    let az = 180.0 - 360.0 * (col as f64 + 0.5) / width as f64;
    let el = 90.0 - 180.0 * (row as f64 + 0.5) / height as f64;
    (wrap_azimuth_deg(az), el)
}

/// Pixel whose center is nearest to the given direction.
pub fn angles_to_pixel(az_deg: f64, el_deg: f64, width: u32, height: u32) -> (u32, u32) {
    let az = wrap_azimuth_deg(az_deg);
    let col = ((180.0 - az) * width as f64 / 360.0 - 0.5).round() as i64;
    let row = ((90.0 - el_deg) * height as f64 / 180.0 - 0.5).round() as i64;
    (
        col.rem_euclid(width as i64) as u32,
        row.clamp(0, height as i64 - 1) as u32,
    )
}

/// Continuous source pixel coordinates for a direction; columns wrap, rows
/// are clamped by the caller.
pub fn angles_to_pixel_continuous(az_deg: f64, el_deg: f64, width: u32, height: u32) -> (f64, f64) {
    let az = wrap_azimuth_deg(az_deg);
    let col = (180.0 - az) * width as f64 / 360.0 - 0.5;
    let row = (90.0 - el_deg) * height as f64 / 180.0 - 0.5;
    (col, row)
}

/// Transform an equirectangular frame consistently with an audio channel
/// swap. Exact pixel moves only, no resampling.
pub fn avcs_frame<P>(
    img: &ImageBuffer<P, Vec<u8>>,
    t: &AcsTransform,
) -> Result<ImageBuffer<P, Vec<u8>>>
where
    P: Pixel<Subpixel = u8> + 'static,
{
    let (width, height) = img.dimensions();
    if width % 2 != 0 {
        return Err(Error::Image(format!(
            "equirectangular width must be even, got {width}"
        )));
    }
    // the azimuth offset must land on a whole column
    let offset = t.azimuth_offset_deg;
    let divisor = if offset == 0.0 {
        1
    } else if offset.abs() == 90.0 {
        4
    } else {
        2
    };
    if width as usize % divisor != 0 {
        return Err(Error::Image(format!(
            "width {width} cannot realize a {offset} degree shift as a whole-column roll"
        )));
    }
    let shift = (offset * width as f64 / 360.0).round() as i64;
    let flip_h = t.azimuth_sign < 0.0;
    let flip_v = t.elevation_sign < 0.0;

    let mut out = ImageBuffer::new(width, height);
    for out_row in 0..height {
        let src_row = if flip_v { height - 1 - out_row } else { out_row };
        for out_col in 0..width {
            let base = if flip_h {
                width as i64 - 1 - out_col as i64 - shift
            } else {
                out_col as i64 + shift
            };
            let src_col = base.rem_euclid(width as i64) as u32;
            out.put_pixel(out_col, out_row, *img.get_pixel(src_col, src_row));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::acs::acs_table;
    use image::RgbImage;

    #[test]
    fn pixel_angle_convention_fixed_points() {
        // center of a 448x224 frame straddles azimuth 0
        let (az_l, _) = pixel_to_angles(223, 112, 448, 224);
        let (az_r, _) = pixel_to_angles(224, 112, 448, 224);
        assert!(az_l > 0.0 && az_r < 0.0);
        assert!((az_l + az_r).abs() < 1e-9);

        // leftmost column sits just under +180, top row just under +90
        let (az, el) = pixel_to_angles(0, 0, 448, 224);
        assert!(az > 179.0 && el > 89.0);
    }

    #[test]
    fn pixel_round_trip_on_centers() {
        for col in [0u32, 5, 111, 223, 224, 447] {
            for row in [0u32, 1, 100, 223] {
                let (az, el) = pixel_to_angles(col, row, 448, 224);
                assert_eq!(angles_to_pixel(az, el, 448, 224), (col, row));
            }
        }
    }

    fn marker_case(t: &AcsTransform, col: u32, row: u32) {
        let (w, h) = (448u32, 224u32);
        let mut img = RgbImage::new(w, h);
        img.put_pixel(col, row, image::Rgb([255, 255, 255]));

        let (az, el) = pixel_to_angles(col, row, w, h);
        let (m_az, m_el) = t.map_angles(az, el);
        let expected = angles_to_pixel(m_az, m_el, w, h);

        let out = avcs_frame(&img, t).unwrap();
        let got = (0..w)
            .flat_map(|c| (0..h).map(move |r| (c, r)))
            .find(|&(c, r)| out.get_pixel(c, r)[0] == 255)
            .expect("marker vanished");
        assert_eq!(got, expected, "transform {}", t.id);
    }

    #[test]
    fn marker_moves_exactly_for_all_transforms() {
        for t in acs_table() {
            for &(c, r) in &[(100u32, 60u32), (300, 150), (10, 2), (440, 221), (224, 112)] {
                marker_case(&t, c, r);
            }
        }
    }

    #[test]
    fn identity_transform_copies_the_image() {
        let mut img = RgbImage::new(448, 224);
        for (i, p) in img.pixels_mut().enumerate() {
            p.0 = [(i % 251) as u8, (i % 13) as u8, (i % 7) as u8];
        }
        let out = avcs_frame(&img, &acs_table()[2]).unwrap();
        assert_eq!(out.as_raw(), img.as_raw());
    }

    #[test]
    fn half_turn_applied_twice_is_identity() {
        let mut img = RgbImage::new(448, 224);
        for (i, p) in img.pixels_mut().enumerate() {
            p.0 = [(i % 255) as u8, 0, 0];
        }
        let t = acs_table()[6];
        let twice = avcs_frame(&avcs_frame(&img, &t).unwrap(), &t).unwrap();
        assert_eq!(twice.as_raw(), img.as_raw());
    }

    #[test]
    fn odd_and_indivisible_widths_are_rejected() {
        let img = RgbImage::new(446, 223); // odd width after the even check? 446 is even but not /4
        assert!(avcs_frame(&img, &acs_table()[0]).is_err()); // 90 deg shift needs /4
        let odd = RgbImage::new(447, 224);
        assert!(avcs_frame(&odd, &acs_table()[2]).is_err());
    }

    #[test]
    fn gray_frames_pass_through_the_same_path() {
        let mut img = image::GrayImage::new(448, 224);
        img.put_pixel(100, 60, image::Luma([200]));
        let out = avcs_frame(&img, &acs_table()[6]).unwrap();
        let (az, el) = pixel_to_angles(100, 60, 448, 224);
        let (m_az, m_el) = acs_table()[6].map_angles(az, el);
        let (ec, er) = angles_to_pixel(m_az, m_el, 448, 224);
        assert_eq!(out.get_pixel(ec, er)[0], 200);
    }
}
