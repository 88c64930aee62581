//! Mel-space acoustic intensity vectors.
//!
//! Per TF bin the first-order intensity is `Re{conj(W) * (X, Y, Z)}`; each
//! component is aggregated through the mel filterbank and the resulting
//! 3-vector is normalized per (frame, band) so the output is a pure
//! direction field.

use crate::clip::{ACN_W, ACN_X, ACN_Y, ACN_Z};
use crate::error::{Error, Result};
use crate::features::mel::MelFilterbank;
use crate::features::stft::StftTensor;

const NORM_EPS: f64 = 1e-8;

/// Intensity directions ordered (Ix, Iy, Iz), laid out component-major
/// `[3 x num_frames x num_bands]`.
pub fn intensity_vectors(stft: &StftTensor, fb: &MelFilterbank) -> Result<Vec<f64>> {
    if stft.channels.len() != 4 {
        return Err(Error::Shape(format!(
            "intensity vectors need a 4-channel FOA spectrogram, got {} channels",
            stft.channels.len()
        )));
    }
    let w = &stft.channels[ACN_W];
    let x = &stft.channels[ACN_X];
    let y = &stft.channels[ACN_Y];
    let z = &stft.channels[ACN_Z];
    if w.num_bins != fb.num_bins {
        return Err(Error::Shape(format!(
            "spectrogram has {} bins, filterbank expects {}",
            w.num_bins, fb.num_bins
        )));
    }

    let frames = w.num_frames;
    let bands = fb.num_bands;
    let plane = frames * bands;
    let mut out = vec![0.0f64; 3 * plane];

    let mut ix = vec![0.0f64; w.num_bins];
    let mut iy = vec![0.0f64; w.num_bins];
    let mut iz = vec![0.0f64; w.num_bins];
    let mut mx = vec![0.0f64; bands];
    let mut my = vec![0.0f64; bands];
    let mut mz = vec![0.0f64; bands];

    for t in 0..frames {
        let (wf, xf, yf, zf) = (w.frame(t), x.frame(t), y.frame(t), z.frame(t));
        for k in 0..w.num_bins {
            let wc = wf[k].conj();
            ix[k] = (wc * xf[k]).re;
            iy[k] = (wc * yf[k]).re;
            iz[k] = (wc * zf[k]).re;
        }
        fb.apply(&ix, &mut mx);
        fb.apply(&iy, &mut my);
        fb.apply(&iz, &mut mz);
        for b in 0..bands {
            let n = (mx[b] * mx[b] + my[b] * my[b] + mz[b] * mz[b]).sqrt() + NORM_EPS;
            out[t * bands + b] = mx[b] / n;
            out[plane + t * bands + b] = my[b] / n;
            out[2 * plane + t * bands + b] = mz[b] / n;
        }
    }
    Ok(out)
}
