//! Dense f64 tensors and the handful of differentiable ops the networks need.
//!
//! Layout is always row-major with channels last: images are [H, W, C],
//! batches are [N, H, W, C], conv kernels are [kh, kw, c_in, c_out].

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(shape: &[usize]) -> Tensor {
        let len = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![0.0; len],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<f64>) -> Result<Tensor> {
        let len: usize = shape.iter().product();
        if len != data.len() {
            return Err(Error::ShapeMismatch(format!(
                "shape {:?} wants {} elements, got {}",
                shape,
                len,
                data.len()
            )));
        }
        Ok(Tensor {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn full(shape: &[usize], value: f64) -> Tensor {
        let len = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![value; len],
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Reinterprets the buffer under a new shape of equal volume.
    pub fn reshaped(&self, shape: &[usize]) -> Result<Tensor> {
        Tensor::from_vec(shape, self.data.clone())
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Tensor, f: impl Fn(f64, f64) -> f64) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "zip over {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, k: f64) -> Tensor {
        self.map(|v| v * k)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Interprets a rank-3 image as a single-image batch.
    pub fn as_batch(&self) -> Result<Tensor> {
        match self.shape.len() {
            3 => {
                let mut shape = vec![1];
                shape.extend_from_slice(&self.shape);
                self.reshaped(&shape)
            }
            4 => Ok(self.clone()),
            _ => Err(Error::ShapeMismatch(format!(
                "expected rank 3 or 4, got {:?}",
                self.shape
            ))),
        }
    }

    /// Drops a leading batch dimension of 1.
    pub fn squeeze_batch(&self) -> Result<Tensor> {
        if self.shape.len() == 4 && self.shape[0] == 1 {
            self.reshaped(&self.shape[1..])
        } else {
            Err(Error::ShapeMismatch(format!(
                "cannot squeeze {:?}",
                self.shape
            )))
        }
    }
}

fn batch_dims(t: &Tensor, what: &str) -> Result<(usize, usize, usize, usize)> {
    match *t.shape() {
        [n, h, w, c] => Ok((n, h, w, c)),
        [h, w, c] => Ok((1, h, w, c)),
        _ => Err(Error::ShapeMismatch(format!(
            "{what} must be rank 3 or 4, got {:?}",
            t.shape()
        ))),
    }
}

fn kernel_dims(k: &Tensor) -> Result<(usize, usize, usize, usize)> {
    match *k.shape() {
        [kh, kw, ci, co] if kh == kw && kh % 2 == 1 => Ok((kh, kw, ci, co)),
        _ => Err(Error::ShapeMismatch(format!(
            "kernel must be [k, k, c_in, c_out] with odd k, got {:?}",
            k.shape()
        ))),
    }
}

/// Stride-1 convolution with zero same-padding.
///
/// Output spatial size equals input spatial size; the rank of the result
/// matches the rank of the input.
pub fn conv2d_forward(input: &Tensor, kernel: &Tensor, bias: &[f64]) -> Result<Tensor> {
    let (n, h, w, ci) = batch_dims(input, "conv input")?;
    let (kh, _kw, kci, co) = kernel_dims(kernel)?;
    if kci != ci {
        return Err(Error::ShapeMismatch(format!(
            "kernel expects {kci} input channels, input has {ci}"
        )));
    }
    if bias.len() != co {
        return Err(Error::ShapeMismatch(format!(
            "bias length {} vs {co} output channels",
            bias.len()
        )));
    }
    let pad = (kh / 2) as isize;
    let mut out_shape = input.shape().to_vec();
    *out_shape.last_mut().unwrap() = co;
    let mut out = Tensor::zeros(&out_shape);

    let xd = input.data();
    let kd = kernel.data();
    let od = out.data_mut();
    for bn in 0..n {
        for y in 0..h {
            for x in 0..w {
                let op = ((bn * h + y) * w + x) * co;
                od[op..op + co].copy_from_slice(bias);
                for dy in 0..kh {
                    let iy = y as isize + dy as isize - pad;
                    if iy < 0 || iy >= h as isize {
                        continue;
                    }
                    for dx in 0..kh {
                        let ix = x as isize + dx as isize - pad;
                        if ix < 0 || ix >= w as isize {
                            continue;
                        }
                        let ip = ((bn * h + iy as usize) * w + ix as usize) * ci;
                        let kp = (dy * kh + dx) * ci * co;
                        let in_px = &xd[ip..ip + ci];
                        let out_px = &mut od[op..op + co];
                        for (c, &v) in in_px.iter().enumerate() {
                            let krow = &kd[kp + c * co..kp + (c + 1) * co];
                            for (o, &kv) in krow.iter().enumerate() {
                                out_px[o] += v * kv;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Gradients of [`conv2d_forward`] with respect to input, kernel, and bias.
pub fn conv2d_backward(
    input: &Tensor,
    kernel: &Tensor,
    upstream: &Tensor,
) -> Result<(Tensor, Tensor, Vec<f64>)> {
    let (n, h, w, ci) = batch_dims(input, "conv input")?;
    let (kh, _kw, kci, co) = kernel_dims(kernel)?;
    let (un, uh, uw, uc) = batch_dims(upstream, "conv upstream")?;
    if kci != ci || (un, uh, uw, uc) != (n, h, w, co) {
        return Err(Error::ShapeMismatch(format!(
            "conv backward: input {:?}, kernel {:?}, upstream {:?}",
            input.shape(),
            kernel.shape(),
            upstream.shape()
        )));
    }
    let pad = (kh / 2) as isize;
    let mut gin = Tensor::zeros(input.shape());
    let mut gker = Tensor::zeros(kernel.shape());
    let mut gbias = vec![0.0; co];

    let xd = input.data();
    let kd = kernel.data();
    let ud = upstream.data();
    let gid = gin.data_mut();
    let gkd = gker.data_mut();
    for bn in 0..n {
        for y in 0..h {
            for x in 0..w {
                let up = ((bn * h + y) * w + x) * co;
                let up_px = &ud[up..up + co];
                for (o, &u) in up_px.iter().enumerate() {
                    gbias[o] += u;
                }
                for dy in 0..kh {
                    let iy = y as isize + dy as isize - pad;
                    if iy < 0 || iy >= h as isize {
                        continue;
                    }
                    for dx in 0..kh {
                        let ix = x as isize + dx as isize - pad;
                        if ix < 0 || ix >= w as isize {
                            continue;
                        }
                        let ip = ((bn * h + iy as usize) * w + ix as usize) * ci;
                        let kp = (dy * kh + dx) * ci * co;
                        for c in 0..ci {
                            let krow = &kd[kp + c * co..kp + (c + 1) * co];
                            let mut acc = 0.0;
                            for (o, &u) in up_px.iter().enumerate() {
                                acc += u * krow[o];
                            }
                            gid[ip + c] += acc;
                            let v = xd[ip + c];
                            let gkrow = &mut gkd[kp + c * co..kp + (c + 1) * co];
                            for (o, &u) in up_px.iter().enumerate() {
                                gkrow[o] += v * u;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((gin, gker, gbias))
}

pub fn relu_forward(x: &Tensor) -> Tensor {
    x.map(|v| if v > 0.0 { v } else { 0.0 })
}

/// Subgradient convention: d relu(0) = 0.
pub fn relu_backward(input: &Tensor, upstream: &Tensor) -> Result<Tensor> {
    input.zip_map(upstream, |v, u| if v > 0.0 { u } else { 0.0 })
}

/// Bilinear resize of an [H, W, C] image with half-pixel-aligned sample
/// centers: source coordinate of output pixel i is (i + 0.5) * in/out - 0.5,
/// clamped to the valid range at the borders.
pub fn bilinear_resize(x: &Tensor, out_h: usize, out_w: usize) -> Result<Tensor> {
    let (h, w, c) = match *x.shape() {
        [h, w, c] => (h, w, c),
        _ => {
            return Err(Error::ShapeMismatch(format!(
                "resize expects [H, W, C], got {:?}",
                x.shape()
            )))
        }
    };
    if out_h == 0 || out_w == 0 {
        return Err(Error::InvalidArgument("resize to empty image".into()));
    }
    let mut out = Tensor::zeros(&[out_h, out_w, c]);
    let xd = x.data();
    let od = out.data_mut();
    let sy = h as f64 / out_h as f64;
    let sx = w as f64 / out_w as f64;
    for oy in 0..out_h {
        let fy = ((oy as f64 + 0.5) * sy - 0.5).clamp(0.0, (h - 1) as f64);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(h - 1);
        let wy = fy - y0 as f64;
        for ox in 0..out_w {
            let fx = ((ox as f64 + 0.5) * sx - 0.5).clamp(0.0, (w - 1) as f64);
            let x0 = fx.floor() as usize;
            let x1 = (x0 + 1).min(w - 1);
            let wx = fx - x0 as f64;
            let p00 = (y0 * w + x0) * c;
            let p01 = (y0 * w + x1) * c;
            let p10 = (y1 * w + x0) * c;
            let p11 = (y1 * w + x1) * c;
            let op = (oy * out_w + ox) * c;
            for ch in 0..c {
                let top = xd[p00 + ch] * (1.0 - wx) + xd[p01 + ch] * wx;
                let bot = xd[p10 + ch] * (1.0 - wx) + xd[p11 + ch] * wx;
                od[op + ch] = top * (1.0 - wy) + bot * wy;
            }
        }
    }
    Ok(out)
}

/// Clamps every value to the displayable [0, 255] range.
pub fn clamp_pixels(x: &Tensor) -> Tensor {
    x.map(|v| v.clamp(0.0, 255.0))
}
