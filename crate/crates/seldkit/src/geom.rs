//! Angle and unit-vector helpers shared across the toolkit.
//!
//! Azimuth is measured counter-clockwise from the front (+x) axis in
//! degrees, wrapped to `[-180, 180)`. Elevation is degrees above the
//! horizontal plane in `[-90, 90]`. The Cartesian frame is x front,
//! y left, z up.

/// Wrap an azimuth in degrees to `[-180, 180)`.
pub fn wrap_azimuth_deg(az: f64) -> f64 {
    let a = (az + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can return exactly 360.0 - eps rounding up to 360.0 for
    // inputs like -1e-14; clamp the open upper bound.
    if a >= 180.0 {
        a - 360.0
    } else {
        a
    }
}

/// Unit direction vector for (azimuth, elevation) in degrees.
pub fn unit_vec_deg(az_deg: f64, el_deg: f64) -> [f64; 3] {
    let (sin_az, cos_az) = az_deg.to_radians().sin_cos();
    let (sin_el, cos_el) = el_deg.to_radians().sin_cos();
    [cos_el * cos_az, cos_el * sin_az, sin_el]
}

/// Convert a direction vector (any nonzero length) to (azimuth, elevation)
/// in degrees.
pub fn vec_to_angles_deg(v: [f64; 3]) -> (f64, f64) {
    let az = v[1].atan2(v[0]).to_degrees();
    let el = v[2].atan2(v[0].hypot(v[1])).to_degrees();
    (wrap_azimuth_deg(az), el)
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(v: [f64; 3]) -> f64 {
    dot3(v, v).sqrt()
}

/// Normalize to unit length. Returns `None` for the zero vector.
pub fn normalize3(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = norm3(v);
    if n == 0.0 {
        None
    } else {
        Some([v[0] / n, v[1] / n, v[2] / n])
    }
}

/// Great-circle angle in degrees between two unit (or merely nonzero)
/// vectors. Range `[0, 180]`.
pub fn angular_distance_vec_deg(a: [f64; 3], b: [f64; 3]) -> f64 {
    let na = norm3(a);
    let nb = norm3(b);
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let cos = (dot3(a, b) / (na * nb)).clamp(-1.0, 1.0);
    cos.acos().to_degrees()
}

/// Great-circle angle in degrees between two (azimuth, elevation) pairs.
pub fn angular_distance_deg(a: (f64, f64), b: (f64, f64)) -> f64 {
    angular_distance_vec_deg(unit_vec_deg(a.0, a.1), unit_vec_deg(b.0, b.1))
}
