//! Frequency-domain tools: an orthonormal 2-D DCT, rectangular band masks,
//! and a quantizing block codec that mimics JPEG luminance compression
//! without the entropy-coding stage.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Orthonormal DCT-II basis matrix for a given length, cached per size.
/// basis[u * n + i] = a(u) * cos(pi * (i + 0.5) * u / n).
fn basis(n: usize) -> std::sync::Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut m = vec![0.0; n * n];
            let norm0 = (1.0 / n as f64).sqrt();
            let norm = (2.0 / n as f64).sqrt();
            for u in 0..n {
                let a = if u == 0 { norm0 } else { norm };
                for i in 0..n {
                    m[u * n + i] =
                        a * (std::f64::consts::PI * (i as f64 + 0.5) * u as f64 / n as f64).cos();
                }
            }
            std::sync::Arc::new(m)
        })
        .clone()
}

fn image_dims(x: &Tensor) -> Result<(usize, usize, usize)> {
    match *x.shape() {
        [h, w, c] if h > 0 && w > 0 && c > 0 => Ok((h, w, c)),
        _ => Err(Error::ShapeMismatch(format!(
            "expected non-empty [H, W, C], got {:?}",
            x.shape()
        ))),
    }
}

/// out[u, x] = sum_i m[u, i] * src[i, x] over one channel plane, where rows
/// have length `w` and `transpose` applies the matrix along columns instead.
fn apply_basis_rows(src: &[f64], h: usize, w: usize, m: &[f64], out: &mut [f64]) {
    // m is h x h acting on the row index
    for u in 0..h {
        let mrow = &m[u * h..(u + 1) * h];
        let orow = &mut out[u * w..(u + 1) * w];
        orow.fill(0.0);
        for i in 0..h {
            let coeff = mrow[i];
            if coeff == 0.0 {
                continue;
            }
            let srow = &src[i * w..(i + 1) * w];
            for (o, &s) in orow.iter_mut().zip(srow) {
                *o += coeff * s;
            }
        }
    }
}

fn transform_plane(plane: &[f64], h: usize, w: usize, inverse: bool) -> Vec<f64> {
    let mh = basis(h);
    let mw = basis(w);
    // rows first: along y with the h-basis, then along x with the w-basis
    let mut tmp = vec![0.0; h * w];
    if inverse {
        // inverse uses the transpose: src[i] = sum_u m[u, i] * coef[u]
        let mut mt = vec![0.0; h * h];
        for u in 0..h {
            for i in 0..h {
                mt[i * h + u] = mh[u * h + i];
            }
        }
        apply_basis_rows(plane, h, w, &mt, &mut tmp);
    } else {
        apply_basis_rows(plane, h, w, &mh, &mut tmp);
    }
    let mut out = vec![0.0; h * w];
    // columns: transpose, transform rows, transpose back
    let mut t = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            t[x * h + y] = tmp[y * w + x];
        }
    }
    let mut t2 = vec![0.0; w * h];
    if inverse {
        let mut mt = vec![0.0; w * w];
        for u in 0..w {
            for i in 0..w {
                mt[i * w + u] = mw[u * w + i];
            }
        }
        apply_basis_rows(&t, w, h, &mt, &mut t2);
    } else {
        apply_basis_rows(&t, w, h, &mw, &mut t2);
    }
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = t2[x * h + y];
        }
    }
    out
}

fn transform_image(x: &Tensor, inverse: bool) -> Result<Tensor> {
    let (h, w, c) = image_dims(x)?;
    let mut out = Tensor::zeros(x.shape());
    let xd = x.data();
    let od = out.data_mut();
    let mut plane = vec![0.0; h * w];
    for ch in 0..c {
        for i in 0..h * w {
            plane[i] = xd[i * c + ch];
        }
        let t = transform_plane(&plane, h, w, inverse);
        for i in 0..h * w {
            od[i * c + ch] = t[i];
        }
    }
    Ok(out)
}

/// Orthonormal 2-D DCT-II applied per channel of an [H, W, C] image.
pub fn dct2(x: &Tensor) -> Result<Tensor> {
    transform_image(x, false)
}

/// Inverse of [`dct2`]; orthonormality makes it the transpose transform.
pub fn idct2(coeffs: &Tensor) -> Result<Tensor> {
    transform_image(coeffs, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Low,
    High,
}

/// Rectangular pass band over 2-D DCT coefficients.
///
/// With `k_h = ceil(ratio * H)` and `k_w = ceil(ratio * W)`, the low band
/// keeps coefficients (u, v) with u < k_h and v < k_w, and the high band
/// keeps u >= H - k_h and v >= W - k_w. ratio = 1 passes everything in
/// either band.
#[derive(Debug, Clone)]
pub struct FrequencyMask {
    pub band: Band,
    pub ratio: f64,
    pub height: usize,
    pub width: usize,
}

impl FrequencyMask {
    pub fn new(band: Band, ratio: f64, height: usize, width: usize) -> Result<FrequencyMask> {
        if !(0.0 < ratio && ratio <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "mask ratio must be in (0, 1], got {ratio}"
            )));
        }
        if height == 0 || width == 0 {
            return Err(Error::InvalidArgument("mask over empty image".into()));
        }
        Ok(FrequencyMask {
            band,
            ratio,
            height,
            width,
        })
    }

    fn kept(&self) -> (usize, usize) {
        let kh = ((self.ratio * self.height as f64).ceil() as usize).min(self.height);
        let kw = ((self.ratio * self.width as f64).ceil() as usize).min(self.width);
        (kh.max(1), kw.max(1))
    }

    pub fn is_full_pass(&self) -> bool {
        let (kh, kw) = self.kept();
        kh == self.height && kw == self.width
    }

    pub fn keeps(&self, u: usize, v: usize) -> bool {
        let (kh, kw) = self.kept();
        match self.band {
            Band::Low => u < kh && v < kw,
            Band::High => u >= self.height - kh && v >= self.width - kw,
        }
    }

    /// 0/1 coefficient mask as an [H, W, 1] tensor.
    pub fn coefficients(&self) -> Tensor {
        let mut t = Tensor::zeros(&[self.height, self.width, 1]);
        for u in 0..self.height {
            for v in 0..self.width {
                if self.keeps(u, v) {
                    t.data_mut()[u * self.width + v] = 1.0;
                }
            }
        }
        t
    }
}

/// Projects an [H, W, C] perturbation onto the mask's pass band:
/// IDCT(mask * DCT(delta)). A full-pass mask returns the input unchanged.
pub fn apply_mask(delta: &Tensor, mask: &FrequencyMask) -> Result<Tensor> {
    let (h, w, _c) = image_dims(delta)?;
    if h != mask.height || w != mask.width {
        return Err(Error::ShapeMismatch(format!(
            "mask is {}x{}, delta is {h}x{w}",
            mask.height, mask.width
        )));
    }
    if mask.is_full_pass() {
        return Ok(delta.clone());
    }
    let mut coeffs = dct2(delta)?;
    let c = coeffs.shape()[2];
    let cd = coeffs.data_mut();
    for u in 0..h {
        for v in 0..w {
            if !mask.keeps(u, v) {
                let p = (u * w + v) * c;
                cd[p..p + c].fill(0.0);
            }
        }
    }
    idct2(&coeffs)
}

/// Fraction of squared DCT energy lying outside the mask's pass band.
pub fn out_of_band_energy(delta: &Tensor, mask: &FrequencyMask) -> Result<f64> {
    let coeffs = dct2(delta)?;
    let (h, w, c) = image_dims(&coeffs)?;
    let mut outside = 0.0;
    let mut total = 0.0;
    for u in 0..h {
        for v in 0..w {
            let p = (u * w + v) * c;
            for ch in 0..c {
                let e = coeffs.data()[p + ch] * coeffs.data()[p + ch];
                total += e;
                if !mask.keeps(u, v) {
                    outside += e;
                }
            }
        }
    }
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(outside / total)
}

/// Standard luminance quantization base table in row-major order.
const LUMA_QUANT: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Quantizer step table for a quality setting, using the libjpeg scaling rule.
pub fn quant_table(quality: u8) -> Result<[u16; 64]> {
    if !(1..=100).contains(&quality) {
        return Err(Error::InvalidArgument(format!(
            "quality must be 1..=100, got {quality}"
        )));
    }
    let q = quality as u32;
    let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
    let mut table = [0u16; 64];
    for (out, &base) in table.iter_mut().zip(&LUMA_QUANT) {
        let v = (base as u32 * scale + 50) / 100;
        *out = v.clamp(1, 255) as u16;
    }
    Ok(table)
}

/// Lossy 8x8 block codec: level shift, orthonormal DCT, quantize, dequantize,
/// inverse DCT, unshift, clamp. Operates per channel; images whose sides are
/// not multiples of 8 are padded by edge replication and cropped back.
pub fn jpeg_like(x: &Tensor, quality: u8) -> Result<Tensor> {
    let (h, w, c) = image_dims(x)?;
    let table = quant_table(quality)?;
    let bh = h.div_ceil(8) * 8;
    let bw = w.div_ceil(8) * 8;
    let xd = x.data();
    let mut out = Tensor::zeros(x.shape());
    let od = out.data_mut();

    let mut plane = vec![0.0; bh * bw];
    let mut block = vec![0.0; 64];
    for ch in 0..c {
        for y in 0..bh {
            let sy = y.min(h - 1);
            for xcol in 0..bw {
                let sx = xcol.min(w - 1);
                plane[y * bw + xcol] = xd[(sy * w + sx) * c + ch] - 128.0;
            }
        }
        for by in (0..bh).step_by(8) {
            for bx in (0..bw).step_by(8) {
                for y in 0..8 {
                    for xcol in 0..8 {
                        block[y * 8 + xcol] = plane[(by + y) * bw + bx + xcol];
                    }
                }
                let mut coeffs = transform_plane(&block, 8, 8, false);
                for (v, &q) in coeffs.iter_mut().zip(&table) {
                    let q = q as f64;
                    *v = (*v / q).round() * q;
                }
                let spatial = transform_plane(&coeffs, 8, 8, true);
                for y in 0..8 {
                    let gy = by + y;
                    if gy >= h {
                        continue;
                    }
                    for xcol in 0..8 {
                        let gx = bx + xcol;
                        if gx >= w {
                            continue;
                        }
                        od[(gy * w + gx) * c + ch] =
                            (spatial[y * 8 + xcol] + 128.0).clamp(0.0, 255.0);
                    }
                }
            }
        }
    }
    Ok(out)
}
