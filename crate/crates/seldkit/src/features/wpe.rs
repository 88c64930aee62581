//! Single-channel weighted-prediction-error dereverberation.
//!
//! Works per STFT frequency bin: iteratively re-estimate the time-varying
//! signal variance, solve a Tikhonov-regularized weighted least-squares
//! problem for a multi-tap linear predictor over delayed frames, and
//! subtract the predicted late reverberation. The direct signal returns to
//! the time domain through the inverse STFT; the reverberant component is
//! the sample-wise remainder against the input.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::features::stft::{istft, stft_channel, Spectrogram, StftConfig};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Predictor configuration. `epsilon` floors the per-frame variance
/// estimate as a fraction of the bin's peak observed power, keeping the
/// iterative re-weighting bounded at any input level; the Tikhonov weight
/// is fixed at 1e-6 of the mean regressor power.
#[derive(Debug, Clone, Copy)]
pub struct WpeConfig {
    pub taps: usize,
    pub delay: usize,
    pub iterations: usize,
    pub epsilon: f64,
}

impl Default for WpeConfig {
    fn default() -> Self {
        WpeConfig {
            taps: 60,
            delay: 5,
            iterations: 5,
            epsilon: 1e-4,
        }
    }
}

impl WpeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.taps < 1 {
            return Err(Error::InvalidInput("wpe taps must be >= 1".into()));
        }
        if self.delay < 1 {
            return Err(Error::InvalidInput("wpe delay must be >= 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidInput("wpe epsilon must be > 0".into()));
        }
        Ok(())
    }
}

const TIKHONOV_RELATIVE: f64 = 1e-6;

/// Split the omni channel into (direct, reverberant) waveforms.
/// `reverb + direct` reproduces the input sample-wise by construction.
pub fn wpe_direct(
    omni: &[f64],
    stft_cfg: &StftConfig,
    cfg: &WpeConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    cfg.validate()?;
    if omni.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidInput("non-finite sample in omni input".into()));
    }
    let min_len = (cfg.taps + cfg.delay + 1) * stft_cfg.hop;
    if omni.len() < min_len {
        return Err(Error::TooShort(format!(
            "{} samples, wpe needs at least {min_len}",
            omni.len()
        )));
    }

    let spec = stft_channel(omni, stft_cfg)?;
    let frames = spec.num_frames;
    let bins = spec.num_bins;

    // per-bin time series, split into re/im for the inner loops
    let mut series: Vec<(Vec<f64>, Vec<f64>)> = (0..bins)
        .map(|_| (vec![0.0; frames], vec![0.0; frames]))
        .collect();
    for t in 0..frames {
        let frame = spec.frame(t);
        for (k, s) in series.iter_mut().enumerate() {
            s.0[t] = frame[k].re;
            s.1[t] = frame[k].im;
        }
    }

    let run = |s: &mut (Vec<f64>, Vec<f64>)| {
        if cfg.iterations > 0 {
            let (d_re, d_im) = wpe_bin(&s.0, &s.1, cfg);
            s.0 = d_re;
            s.1 = d_im;
        }
    };
    #[cfg(feature = "parallel")]
    series.par_iter_mut().for_each(run);
    #[cfg(not(feature = "parallel"))]
    series.iter_mut().for_each(run);

    let mut out = Spectrogram::zeros(frames, bins);
    for t in 0..frames {
        let frame = out.frame_mut(t);
        for (k, s) in series.iter().enumerate() {
            frame[k] = Complex64::new(s.0[t], s.1[t]);
        }
    }

    let direct = istft(&out, stft_cfg, omni.len())?;
    let reverb: Vec<f64> = omni.iter().zip(&direct).map(|(o, d)| o - d).collect();
    Ok((direct, reverb))
}

/// One frequency bin of the iterative predictor. Returns the dereverberated
/// series.
fn wpe_bin(x_re: &[f64], x_im: &[f64], cfg: &WpeConfig) -> (Vec<f64>, Vec<f64>) {
    run_bin(x_re, x_im, cfg, None)
}

/// Core iteration; optionally records the per-iteration objective
/// `sum_t |d(t)|^2 / lambda(t) + ln lambda(t)` for convergence checks.
fn run_bin(
    x_re: &[f64],
    x_im: &[f64],
    cfg: &WpeConfig,
    mut trace: Option<&mut Vec<f64>>,
) -> (Vec<f64>, Vec<f64>) {
    let t_len = x_re.len();
    let k = cfg.taps;
    let pad = cfg.delay + k - 1;

    // zero-pad the past so every frame has a full regressor
    let mut xp_re = vec![0.0f64; pad + t_len];
    let mut xp_im = vec![0.0f64; pad + t_len];
    xp_re[pad..].copy_from_slice(x_re);
    xp_im[pad..].copy_from_slice(x_im);

    let mut d_re = x_re.to_vec();
    let mut d_im = x_im.to_vec();
    let mut weights = vec![0.0f64; t_len];
    let mut pred_re = vec![0.0f64; t_len];
    let mut pred_im = vec![0.0f64; t_len];
    let mut mat = vec![Complex64::new(0.0, 0.0); k * k];
    let mut rhs = vec![Complex64::new(0.0, 0.0); k];

    // regressor i is the series delayed by delay + i frames
    let reg = |i: usize| -> (&[f64], &[f64]) {
        let off = k - 1 - i;
        (&xp_re[off..off + t_len], &xp_im[off..off + t_len])
    };

    // the variance floor scales with the bin's peak observed power so
    // re-weighting stays bounded regardless of signal level
    let peak_power = x_re
        .iter()
        .zip(x_im)
        .map(|(&re, &im)| re * re + im * im)
        .fold(0.0f64, f64::max);
    let floor = (cfg.epsilon * peak_power).max(f64::MIN_POSITIVE);

    for _ in 0..cfg.iterations {
        for t in 0..t_len {
            let power = d_re[t] * d_re[t] + d_im[t] * d_im[t];
            weights[t] = 1.0 / power.max(floor);
        }
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(objective(&d_re, &d_im, floor));
        }

        for i in 0..k {
            let (a_re, a_im) = reg(i);
            let (pr, pi) = weighted_corr(&weights, a_re, a_im, x_re, x_im);
            rhs[i] = Complex64::new(pr, pi);
            for j in 0..=i {
                let (b_re, b_im) = reg(j);
                let (rr, ri) = weighted_corr(&weights, a_re, a_im, b_re, b_im);
                mat[i * k + j] = Complex64::new(rr, ri);
            }
        }

        let trace_scale = (0..k).map(|i| mat[i * k + i].re).sum::<f64>() / k as f64;
        let delta = if trace_scale > 0.0 {
            TIKHONOV_RELATIVE * trace_scale
        } else {
            f64::EPSILON
        };
        for i in 0..k {
            mat[i * k + i] += delta;
        }

        let mut taps = rhs.clone();
        if !solve_hermitian_in_place(&mut mat, &mut taps, k) {
            // regularized system should always factor; bail to the
            // identity predictor if it somehow does not
            break;
        }

        pred_re.iter_mut().for_each(|v| *v = 0.0);
        pred_im.iter_mut().for_each(|v| *v = 0.0);
        for (i, g) in taps.iter().enumerate() {
            let (a_re, a_im) = reg(i);
            let (gr, gi) = (g.re, g.im);
            // accumulate conj(g_i) * regressor_i
            for t in 0..t_len {
                pred_re[t] += gr * a_re[t] + gi * a_im[t];
                pred_im[t] += gr * a_im[t] - gi * a_re[t];
            }
        }
        for t in 0..t_len {
            d_re[t] = x_re[t] - pred_re[t];
            d_im[t] = x_im[t] - pred_im[t];
        }
    }
    if let Some(tr) = trace {
        tr.push(objective(&d_re, &d_im, floor));
    }
    (d_re, d_im)
}

fn objective(d_re: &[f64], d_im: &[f64], epsilon: f64) -> f64 {
    d_re.iter()
        .zip(d_im)
        .map(|(&re, &im)| {
            let p = re * re + im * im;
            let lambda = p.max(epsilon);
            p / lambda + lambda.ln()
        })
        .sum()
}

/// Weighted complex correlation `sum_t w(t) a(t) conj(b(t))`.
#[inline]
fn weighted_corr(w: &[f64], a_re: &[f64], a_im: &[f64], b_re: &[f64], b_im: &[f64]) -> (f64, f64) {
    let mut sr = 0.0f64;
    let mut si = 0.0f64;
    for t in 0..w.len() {
        let wt = w[t];
        let (ar, ai) = (a_re[t], a_im[t]);
        let (br, bi) = (b_re[t], b_im[t]);
        sr += wt * (ar * br + ai * bi);
        si += wt * (ai * br - ar * bi);
    }
    (sr, si)
}

/// Cholesky solve of a Hermitian positive definite system. `mat` holds the
/// lower triangle (row-major k x k); `b` is overwritten with the solution.
fn solve_hermitian_in_place(mat: &mut [Complex64], b: &mut [Complex64], k: usize) -> bool {
    for j in 0..k {
        let mut d = mat[j * k + j].re;
        for m in 0..j {
            d -= mat[j * k + m].norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let ljj = d.sqrt();
        mat[j * k + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..k {
            let mut s = mat[i * k + j];
            for m in 0..j {
                s -= mat[i * k + m] * mat[j * k + m].conj();
            }
            mat[i * k + j] = s / ljj;
        }
    }
    // forward: L y = b
    for i in 0..k {
        let mut s = b[i];
        for m in 0..i {
            s -= mat[i * k + m] * b[m];
        }
        b[i] = s / mat[i * k + i].re;
    }
    // backward: L^H x = y
    for i in (0..k).rev() {
        let mut s = b[i];
        for m in i + 1..k {
            s -= mat[m * k + i].conj() * b[m];
        }
        b[i] = s / mat[i * k + i].re;
    }
    true
}
