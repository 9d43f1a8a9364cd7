//! Image quality metrics and the input/output quality ratio used to score
//! how strongly a perturbation degrades a network's output.

use crate::error::{Error, Result};
use crate::models::ImageToImageModel;
use crate::tensor::{clamp_pixels, Tensor};

/// Dynamic range of the pixel scale.
pub const PEAK: f64 = 255.0;
/// PSNR reported for (near-)identical images.
pub const PSNR_CAP: f64 = 99.0;

/// SSIM window side.
pub const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

fn check_pair(a: &Tensor, b: &Tensor) -> Result<(usize, usize, usize)> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "metric over {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    match *a.shape() {
        [h, w, c] if h > 0 && w > 0 && c > 0 => Ok((h, w, c)),
        _ => Err(Error::ShapeMismatch(format!(
            "metric expects non-empty [H, W, C], got {:?}",
            a.shape()
        ))),
    }
}

/// Peak signal-to-noise ratio in dB over the [0, 255] scale.
///
/// Inputs are clamped to the displayable range first. Returns [`PSNR_CAP`]
/// when the mean squared error drops below peak^2 * 10^-9.9, the point where
/// the formula would exceed the cap.
pub fn psnr(a: &Tensor, b: &Tensor) -> Result<f64> {
    check_pair(a, b)?;
    let ac = clamp_pixels(a);
    let bc = clamp_pixels(b);
    let mse = ac
        .data()
        .iter()
        .zip(bc.data())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.len() as f64;
    if mse < PEAK * PEAK * 10f64.powf(-9.9) {
        return Ok(PSNR_CAP);
    }
    Ok(10.0 * (PEAK * PEAK / mse).log10())
}

fn gaussian_window() -> [f64; SSIM_WINDOW] {
    let mut w = [0.0; SSIM_WINDOW];
    let half = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for (i, slot) in w.iter_mut().enumerate() {
        let d = i as f64 - half;
        *slot = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        sum += *slot;
    }
    for slot in &mut w {
        *slot /= sum;
    }
    w
}

/// Valid-mode separable Gaussian filtering of an h x w plane; the result is
/// (h - 10) x (w - 10).
fn valid_filter(plane: &[f64], h: usize, w: usize, win: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let oh = h - (SSIM_WINDOW - 1);
    let ow = w - (SSIM_WINDOW - 1);
    // horizontal pass
    let mut tmp = vec![0.0; h * ow];
    for y in 0..h {
        for x in 0..ow {
            let mut acc = 0.0;
            for (k, &wk) in win.iter().enumerate() {
                acc += wk * plane[y * w + x + k];
            }
            tmp[y * ow + x] = acc;
        }
    }
    // vertical pass
    let mut out = vec![0.0; oh * ow];
    for y in 0..oh {
        for x in 0..ow {
            let mut acc = 0.0;
            for (k, &wk) in win.iter().enumerate() {
                acc += wk * tmp[(y + k) * ow + x];
            }
            out[y * ow + x] = acc;
        }
    }
    out
}

/// Mean structural similarity with an 11x11 Gaussian window (sigma 1.5),
/// evaluated at fully valid window positions only and averaged over channels.
///
/// Inputs are clamped to [0, 255]; images smaller than the window are
/// rejected.
pub fn ssim(a: &Tensor, b: &Tensor) -> Result<f64> {
    let (h, w, c) = check_pair(a, b)?;
    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Err(Error::InvalidArgument(format!(
            "ssim needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {h}x{w}"
        )));
    }
    let ac = clamp_pixels(a);
    let bc = clamp_pixels(b);
    let win = gaussian_window();
    let c1 = (SSIM_K1 * PEAK) * (SSIM_K1 * PEAK);
    let c2 = (SSIM_K2 * PEAK) * (SSIM_K2 * PEAK);

    let mut total = 0.0;
    let mut plane_a = vec![0.0; h * w];
    let mut plane_b = vec![0.0; h * w];
    let mut aa = vec![0.0; h * w];
    let mut bb = vec![0.0; h * w];
    let mut ab = vec![0.0; h * w];
    for ch in 0..c {
        for i in 0..h * w {
            let (x, y) = (ac.data()[i * c + ch], bc.data()[i * c + ch]);
            plane_a[i] = x;
            plane_b[i] = y;
            aa[i] = x * x;
            bb[i] = y * y;
            ab[i] = x * y;
        }
        let mu_a = valid_filter(&plane_a, h, w, &win);
        let mu_b = valid_filter(&plane_b, h, w, &win);
        let m_aa = valid_filter(&aa, h, w, &win);
        let m_bb = valid_filter(&bb, h, w, &win);
        let m_ab = valid_filter(&ab, h, w, &win);
        let mut acc = 0.0;
        for i in 0..mu_a.len() {
            let (ma, mb) = (mu_a[i], mu_b[i]);
            let va = m_aa[i] - ma * ma;
            let vb = m_bb[i] - mb * mb;
            let cov = m_ab[i] - ma * mb;
            let num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
            let den = (ma * ma + mb * mb + c1) * (va + vb + c2);
            acc += num / den;
        }
        total += acc / mu_a.len() as f64;
    }
    Ok(total / c as f64)
}

/// Input-side and output-side quality of an attacked image.
#[derive(Debug, Clone, Copy)]
pub struct QualityPair {
    /// PSNR between the clean and attacked inputs.
    pub psnr_input: f64,
    /// PSNR between the clamped model outputs for clean and attacked inputs.
    pub psnr_output: f64,
    /// SSIM counterparts; absent when the image is smaller than the window.
    pub ssim_input: Option<f64>,
    pub ssim_output: Option<f64>,
}

/// Ratio form of [`QualityPair`]: values above 1 mean the output degraded
/// more than the input.
#[derive(Debug, Clone, Copy)]
pub struct VulnerabilityScore {
    pub vi: f64,
    pub vi_ssim: Option<f64>,
}

/// Scores an attacked input against a model: quality in over quality out.
pub fn vulnerability_index(
    model: &ImageToImageModel,
    x: &Tensor,
    x_attacked: &Tensor,
) -> Result<(QualityPair, VulnerabilityScore)> {
    let (h, w, _c) = check_pair(x, x_attacked)?;
    let out_clean = clamp_pixels(&model.forward(x)?);
    let out_attacked = clamp_pixels(&model.forward(x_attacked)?);
    let psnr_input = psnr(x, x_attacked)?;
    let psnr_output = psnr(&out_clean, &out_attacked)?;
    let ssim_ok = h >= SSIM_WINDOW && w >= SSIM_WINDOW;
    let ssim_input = if ssim_ok {
        Some(ssim(x, x_attacked)?)
    } else {
        None
    };
    let ssim_output = if ssim_ok {
        Some(ssim(&out_clean, &out_attacked)?)
    } else {
        None
    };
    let vi = psnr_input / psnr_output;
    let vi_ssim = match (ssim_input, ssim_output) {
        (Some(i), Some(o)) if o.abs() > 1e-12 => Some(i / o),
        _ => None,
    };
    Ok((
        QualityPair {
            psnr_input,
            psnr_output,
            ssim_input,
            ssim_output,
        },
        VulnerabilityScore { vi, vi_ssim },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn image(h: usize, w: usize, f: impl Fn(usize, usize) -> f64) -> Tensor {
        let mut t = Tensor::zeros(&[h, w, 1]);
        for y in 0..h {
            for x in 0..w {
                t.data_mut()[y * w + x] = f(y, x);
            }
        }
        t
    }

    #[test]
    fn psnr_identical_hits_cap() {
        let a = image(8, 8, |y, x| (y * 8 + x) as f64);
        assert_eq!(psnr(&a, &a).unwrap(), PSNR_CAP);
    }

    #[test]
    fn psnr_constant_offset() {
        // uniform +16 offset: 10 log10(255^2 / 256) = 24.0486...
        let a = image(16, 16, |y, x| (y + x) as f64 % 200.0);
        let b = a.map(|v| v + 16.0);
        let got = psnr(&a, &b).unwrap();
        assert!((got - 24.05).abs() < 0.01, "got {got}");
    }

    #[test]
    fn psnr_black_vs_white_is_zero() {
        let a = Tensor::full(&[4, 4, 1], 0.0);
        let b = Tensor::full(&[4, 4, 1], 255.0);
        let got = psnr(&a, &b).unwrap();
        assert!(got.abs() < 1e-12, "got {got}");
    }

    #[test]
    fn psnr_decreases_with_offset_magnitude() {
        let a = Tensor::full(&[8, 8, 1], 128.0);
        let mut last = f64::INFINITY;
        for c in [1.0, 2.0, 5.0, 16.0, 64.0, 127.0] {
            let b = a.map(|v| v + c);
            let p = psnr(&a, &b).unwrap();
            assert!(p < last, "offset {c}: {p} !< {last}");
            last = p;
        }
    }

    #[test]
    fn psnr_clamps_before_comparing() {
        let a = Tensor::full(&[4, 4, 1], 300.0);
        let b = Tensor::full(&[4, 4, 1], 255.0);
        assert_eq!(psnr(&a, &b).unwrap(), PSNR_CAP);
    }

    #[test]
    fn ssim_self_is_exactly_one() {
        let a = image(16, 16, |y, x| ((y * 31 + x * 7) % 256) as f64);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn ssim_rejects_images_smaller_than_window() {
        let a = Tensor::full(&[10, 16, 1], 5.0);
        assert!(ssim(&a, &a).is_err());
    }

    #[test]
    fn ssim_drops_as_noise_grows() {
        let a = image(24, 24, |y, x| 80.0 + ((y * 13 + x * 29) % 96) as f64);
        let mut rng = Rng::new(41);
        let noisy = |amp: f64, rng: &mut Rng| a.map(|v| v + amp * rng.normal());
        let s_small = ssim(&a, &noisy(2.0, &mut rng)).unwrap();
        let s_big = ssim(&a, &noisy(20.0, &mut rng)).unwrap();
        assert!(s_small > s_big, "{s_small} vs {s_big}");
        assert!(s_small > 0.9 && s_big < 0.9);
    }

    /// Direct windowed SSIM with an explicit 2-D Gaussian, no separable
    /// filtering; used as an independent oracle for the tuned path.
    fn ssim_direct(a: &Tensor, b: &Tensor) -> f64 {
        let (h, w) = (a.shape()[0], a.shape()[1]);
        let half = SSIM_WINDOW / 2;
        let mut win2 = vec![0.0; SSIM_WINDOW * SSIM_WINDOW];
        let mut sum = 0.0;
        for y in 0..SSIM_WINDOW {
            for x in 0..SSIM_WINDOW {
                let dy = y as f64 - half as f64;
                let dx = x as f64 - half as f64;
                let v = (-(dy * dy + dx * dx) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
                win2[y * SSIM_WINDOW + x] = v;
                sum += v;
            }
        }
        for v in &mut win2 {
            *v /= sum;
        }
        let c1 = (SSIM_K1 * PEAK) * (SSIM_K1 * PEAK);
        let c2 = (SSIM_K2 * PEAK) * (SSIM_K2 * PEAK);
        let mut acc = 0.0;
        let mut count = 0;
        for cy in half..h - half {
            for cx in half..w - half {
                let (mut ma, mut mb) = (0.0, 0.0);
                for wy in 0..SSIM_WINDOW {
                    for wx in 0..SSIM_WINDOW {
                        let wgt = win2[wy * SSIM_WINDOW + wx];
                        ma += wgt * a.data()[(cy + wy - half) * w + cx + wx - half];
                        mb += wgt * b.data()[(cy + wy - half) * w + cx + wx - half];
                    }
                }
                let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
                for wy in 0..SSIM_WINDOW {
                    for wx in 0..SSIM_WINDOW {
                        let wgt = win2[wy * SSIM_WINDOW + wx];
                        let da = a.data()[(cy + wy - half) * w + cx + wx - half] - ma;
                        let db = b.data()[(cy + wy - half) * w + cx + wx - half] - mb;
                        va += wgt * da * da;
                        vb += wgt * db * db;
                        cov += wgt * da * db;
                    }
                }
                let num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
                let den = (ma * ma + mb * mb + c1) * (va + vb + c2);
                acc += num / den;
                count += 1;
            }
        }
        acc / count as f64
    }

    #[test]
    fn ssim_matches_independent_direct_implementation() {
        // deterministic fixture pair, reproducible in any language
        let a = image(32, 32, |y, x| ((y * 7 + x * 13) % 256) as f64);
        let b = image(32, 32, |y, x| {
            let v = ((y * 7 + x * 13) % 256) as f64 + 12.0 * ((y + 2 * x) as f64 * 0.37).sin();
            v.clamp(0.0, 255.0)
        });
        let fast = ssim(&a, &b).unwrap();
        let slow = ssim_direct(&a, &b);
        assert!((fast - slow).abs() < 1e-6, "{fast} vs {slow}");
    }
}
