//! Procedural grayscale patches and the degradations that turn them into
//! training pairs.
//!
//! Patches compose a linear luminance ramp, a few anti-aliased rectangles
//! and disks, and a band-limited noise texture. Values are quantized to the
//! integer grid so in-memory data matches what survives a PGM round trip.

use crate::error::{Error, Result};
use crate::models::Task;
use crate::rng::Rng;
use crate::tensor::{bilinear_resize, Tensor};

pub const PATCH_SIZE: usize = 48;

/// Separable Gaussian blur with edge replication; kernel side is `k` (odd).
pub fn gaussian_blur(x: &Tensor, sigma: f64, k: usize) -> Result<Tensor> {
    let (h, w, c) = match *x.shape() {
        [h, w, c] => (h, w, c),
        _ => {
            return Err(Error::ShapeMismatch(format!(
                "blur expects [H, W, C], got {:?}",
                x.shape()
            )))
        }
    };
    if k.is_multiple_of(2) || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "blur kernel side {k} must be odd"
        )));
    }
    if sigma <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "blur sigma {sigma} must be positive"
        )));
    }
    let half = (k / 2) as isize;
    let mut win = vec![0.0; k];
    let mut sum = 0.0;
    for (i, slot) in win.iter_mut().enumerate() {
        let d = i as f64 - half as f64;
        *slot = (-d * d / (2.0 * sigma * sigma)).exp();
        sum += *slot;
    }
    for slot in &mut win {
        *slot /= sum;
    }
    let xd = x.data();
    let mut tmp = vec![0.0; h * w * c];
    for y in 0..h {
        for xc in 0..w {
            for ch in 0..c {
                let mut acc = 0.0;
                for (i, &wk) in win.iter().enumerate() {
                    let sx = (xc as isize + i as isize - half).clamp(0, w as isize - 1) as usize;
                    acc += wk * xd[(y * w + sx) * c + ch];
                }
                tmp[(y * w + xc) * c + ch] = acc;
            }
        }
    }
    let mut out = Tensor::zeros(x.shape());
    let od = out.data_mut();
    for y in 0..h {
        for xc in 0..w {
            for ch in 0..c {
                let mut acc = 0.0;
                for (i, &wk) in win.iter().enumerate() {
                    let sy = (y as isize + i as isize - half).clamp(0, h as isize - 1) as usize;
                    acc += wk * tmp[(sy * w + xc) * c + ch];
                }
                od[(y * w + xc) * c + ch] = acc;
            }
        }
    }
    Ok(out)
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// One procedural patch; a seed and an index pin every pixel.
pub fn patch(seed: u64, index: u64, size: usize) -> Tensor {
    let mut rng = Rng::new(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1));
    let h = size;
    let w = size;
    let mut img = Tensor::zeros(&[h, w, 1]);

    // luminance ramp
    let base = rng.uniform_in(95.0, 160.0);
    let angle = rng.uniform_in(0.0, std::f64::consts::TAU);
    let slope = rng.uniform_in(0.2, 1.4);
    let (ca, sa) = (angle.cos(), angle.sin());
    for y in 0..h {
        for x in 0..w {
            let u = x as f64 - w as f64 / 2.0;
            let v = y as f64 - h as f64 / 2.0;
            img.data_mut()[y * w + x] = base + slope * (u * ca + v * sa);
        }
    }

    // anti-aliased shapes: soft edges roughly one pixel wide
    let shapes = 2 + rng.below(3);
    for _ in 0..shapes {
        let offset = rng.uniform_in(-65.0, 65.0);
        if rng.uniform() < 0.5 {
            let cx = rng.uniform_in(6.0, w as f64 - 6.0);
            let cy = rng.uniform_in(6.0, h as f64 - 6.0);
            let r = rng.uniform_in(4.0, w as f64 * 0.3);
            for y in 0..h {
                for x in 0..w {
                    let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
                    let cover = smoothstep((r - d) + 0.5);
                    img.data_mut()[y * w + x] += offset * cover;
                }
            }
        } else {
            let x0 = rng.uniform_in(2.0, w as f64 * 0.6);
            let y0 = rng.uniform_in(2.0, h as f64 * 0.6);
            let x1 = x0 + rng.uniform_in(6.0, w as f64 * 0.45);
            let y1 = y0 + rng.uniform_in(6.0, h as f64 * 0.45);
            for y in 0..h {
                for x in 0..w {
                    let dx = (x as f64 - x0).min(x1 - x as f64);
                    let dy = (y as f64 - y0).min(y1 - y as f64);
                    let cover = smoothstep(dx.min(dy) + 0.5);
                    img.data_mut()[y * w + x] += offset * cover;
                }
            }
        }
    }

    // band-limited texture: blurred white noise rescaled to a chosen amplitude
    let tex_sigma = rng.uniform_in(0.8, 2.5);
    let amp = rng.uniform_in(4.0, 16.0);
    let mut noise = Tensor::zeros(&[h, w, 1]);
    for v in noise.data_mut() {
        *v = rng.normal();
    }
    let smooth = gaussian_blur(&noise, tex_sigma, 9).unwrap();
    let std = {
        let n = smooth.len() as f64;
        let mean = smooth.data().iter().sum::<f64>() / n;
        (smooth
            .data()
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / n)
            .sqrt()
    };
    if std > 1e-9 {
        for (o, &s) in img.data_mut().iter_mut().zip(smooth.data()) {
            *o += amp * s / std;
        }
    }

    img.map(|v| v.clamp(0.0, 255.0).round())
}

/// `count` patches drawn from one seed.
pub fn patches(seed: u64, count: usize, size: usize) -> Vec<Tensor> {
    (0..count as u64).map(|i| patch(seed, i, size)).collect()
}

/// Applies a task's degradation; the result is quantized like the clean
/// patches so file-backed and in-memory pipelines agree.
pub fn degrade(task: &Task, clean: &Tensor, rng: &mut Rng) -> Result<Tensor> {
    let out = match *task {
        Task::Denoise { sigma } => clean.map(|v| v + sigma * rng.normal()),
        Task::SuperResolve { scale } => {
            if scale < 2 {
                return Err(Error::InvalidArgument(format!(
                    "super-resolve scale {scale} must be at least 2"
                )));
            }
            let (h, w) = (clean.shape()[0], clean.shape()[1]);
            if h % scale != 0 || w % scale != 0 {
                return Err(Error::InvalidArgument(format!(
                    "{h}x{w} patch not divisible by scale {scale}"
                )));
            }
            let small = bilinear_resize(clean, h / scale, w / scale)?;
            bilinear_resize(&small, h, w)?
        }
        Task::Deblur {
            blur_sigma,
            kernel_size,
        } => gaussian_blur(clean, blur_sigma, kernel_size)?,
    };
    Ok(out.map(|v| v.clamp(0.0, 255.0).round()))
}

/// (degraded input, clean target) pairs for a task.
pub fn make_pairs(task: &Task, cleans: &[Tensor], rng: &mut Rng) -> Result<Vec<(Tensor, Tensor)>> {
    cleans
        .iter()
        .map(|c| Ok((degrade(task, c, rng)?, c.clone())))
        .collect()
}

/// Seeded 90/10 split; returns (train, validation) index lists.
pub fn split_indices(count: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..count).collect();
    Rng::new(seed ^ 0x5EED_5EED).shuffle(&mut order);
    let val_len = (count / 10).max(1).min(count);
    let val = order[..val_len].to_vec();
    let mut train = order[val_len..].to_vec();
    train.sort_unstable();
    let mut val = val;
    val.sort_unstable();
    (train, val)
}
