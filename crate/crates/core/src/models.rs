//! Small convolutional image-to-image networks.
//!
//! Three restoration flavors share one body: a stack of 3x3 same-padding
//! convolutions with ReLUs between them, plus a skip that either adds the
//! input to the stack output (super-resolution, deblurring) or subtracts the
//! stack output from the input (denoising, where the stack predicts noise).
//! Forward passes never clamp; callers clamp when they need pixels.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::tensor::{conv2d_backward, conv2d_forward, relu_backward, relu_forward, Tensor};

/// Restoration task a model is trained for. The parameters describe the
/// degradation used to build its training pairs, not the network itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Task {
    Denoise { sigma: f64 },
    SuperResolve { scale: usize },
    Deblur { blur_sigma: f64, kernel_size: usize },
}

impl Task {
    pub const fn denoise_default() -> Task {
        Task::Denoise { sigma: 15.0 }
    }

    pub const fn super_resolve_default() -> Task {
        Task::SuperResolve { scale: 2 }
    }

    pub const fn deblur_default() -> Task {
        Task::Deblur {
            blur_sigma: 1.5,
            kernel_size: 7,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Task::Denoise { .. } => "denoise",
            Task::SuperResolve { .. } => "super_resolve",
            Task::Deblur { .. } => "deblur",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    Conv3x3,
    Relu,
    /// output = input + stack output
    ResidualAddInput,
    /// output = input - stack output
    GlobalResidualNoisePredict,
}

/// Shape-level description of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSpec {
    pub kind: LayerKind,
    pub channels_in: usize,
    pub channels_out: usize,
}

#[derive(Debug, Clone)]
enum Layer {
    Conv { kernel: Tensor, bias: Vec<f64> },
    Relu,
    ResidualAddInput,
    GlobalResidualNoisePredict,
}

impl Layer {
    fn kind(&self) -> LayerKind {
        match self {
            Layer::Conv { .. } => LayerKind::Conv3x3,
            Layer::Relu => LayerKind::Relu,
            Layer::ResidualAddInput => LayerKind::ResidualAddInput,
            Layer::GlobalResidualNoisePredict => LayerKind::GlobalResidualNoisePredict,
        }
    }
}

/// Post-ReLU activations captured during a forward pass, in layer order.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub activations: Vec<Tensor>,
}

#[derive(Debug, Clone)]
pub struct ImageToImageModel {
    pub task: Task,
    layers: Vec<Layer>,
}

/// Builds a randomly initialized model: `depth` convolutions with ReLUs
/// between them, `width` channels in the hidden layers, and the skip wiring
/// implied by the task. Weights draw from a He-normal distribution, so a
/// seed fully determines them.
pub fn build_model(
    task: Task,
    depth: usize,
    width: usize,
    rng: &mut Rng,
) -> Result<ImageToImageModel> {
    if depth < 2 {
        return Err(Error::InvalidArgument(format!(
            "depth must be at least 2, got {depth}"
        )));
    }
    if width < 4 {
        return Err(Error::InvalidArgument(format!(
            "width must be at least 4, got {width}"
        )));
    }
    let mut layers = Vec::new();
    for i in 0..depth {
        let c_in = if i == 0 { 1 } else { width };
        let c_out = if i == depth - 1 { 1 } else { width };
        layers.push(he_conv(c_in, c_out, rng));
        if i + 1 < depth {
            layers.push(Layer::Relu);
        }
    }
    layers.push(match task {
        Task::Denoise { .. } => Layer::GlobalResidualNoisePredict,
        _ => Layer::ResidualAddInput,
    });
    Ok(ImageToImageModel { task, layers })
}

fn he_conv(c_in: usize, c_out: usize, rng: &mut Rng) -> Layer {
    let std = (2.0 / (3.0 * 3.0 * c_in as f64)).sqrt();
    let data = (0..3 * 3 * c_in * c_out)
        .map(|_| std * rng.normal())
        .collect();
    Layer::Conv {
        kernel: Tensor::from_vec(&[3, 3, c_in, c_out], data).unwrap(),
        bias: vec![0.0; c_out],
    }
}

/// Per-layer inputs recorded on the way forward; consumed by the backward
/// pass.
struct Tape {
    inputs: Vec<Tensor>,
    output: Tensor,
}

/// (kernel gradient, bias gradient) per conv layer, in forward order.
type WeightGrads = Vec<(Tensor, Vec<f64>)>;

impl ImageToImageModel {
    pub fn layer_specs(&self) -> Vec<LayerSpec> {
        let mut cur = 1usize;
        self.layers
            .iter()
            .map(|l| {
                let (ci, co) = match l {
                    Layer::Conv { kernel, .. } => (kernel.shape()[2], kernel.shape()[3]),
                    _ => (cur, cur),
                };
                cur = co;
                LayerSpec {
                    kind: l.kind(),
                    channels_in: ci,
                    channels_out: co,
                }
            })
            .collect()
    }

    pub fn conv_layer_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| matches!(l, Layer::Conv { .. }))
            .count()
    }

    pub fn relu_layer_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| matches!(l, Layer::Relu))
            .count()
    }

    pub fn with_task(mut self, task: Task) -> ImageToImageModel {
        self.task = task;
        self
    }

    /// Test hook: zeroed weights turn skip-wired models into the identity
    /// and give every activation a closed-form value.
    #[cfg(test)]
    pub(crate) fn zero_all_convs(&mut self) {
        for layer in &mut self.layers {
            if let Layer::Conv { kernel, bias } = layer {
                kernel.data_mut().fill(0.0);
                bias.fill(0.0);
            }
        }
    }

    fn run_forward(&self, x: &Tensor, mut trace: Option<&mut Vec<Tensor>>) -> Result<Tape> {
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut cur = x.clone();
        for layer in &self.layers {
            inputs.push(cur.clone());
            cur = match layer {
                Layer::Conv { kernel, bias } => conv2d_forward(&cur, kernel, bias)?,
                Layer::Relu => {
                    let out = relu_forward(&cur);
                    if let Some(acts) = trace.as_deref_mut() {
                        acts.push(out.clone());
                    }
                    out
                }
                Layer::ResidualAddInput => x.add(&cur)?,
                Layer::GlobalResidualNoisePredict => x.sub(&cur)?,
            };
        }
        Ok(Tape {
            inputs,
            output: cur,
        })
    }

    /// Unclamped forward pass over an [H, W, C] image or [N, H, W, C] batch.
    pub fn forward(&self, x: &Tensor) -> Result<Tensor> {
        Ok(self.run_forward(x, None)?.output)
    }

    /// Forward pass that also captures every post-ReLU activation.
    pub fn forward_traced(&self, x: &Tensor) -> Result<(Tensor, ForwardTrace)> {
        let mut acts = Vec::new();
        let tape = self.run_forward(x, Some(&mut acts))?;
        Ok((tape.output, ForwardTrace { activations: acts }))
    }

    /// Backward pass shared by input-gradient queries and training.
    ///
    /// `taps` adds extra upstream gradient at each post-ReLU activation (in
    /// forward order). Weight gradients are only accumulated when requested.
    fn backward(
        &self,
        tape: &Tape,
        output_grad: Option<&Tensor>,
        taps: &[Tensor],
        want_weights: bool,
    ) -> Result<(Tensor, WeightGrads)> {
        if !taps.is_empty() && taps.len() != self.relu_layer_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} taps for {} ReLU layers",
                taps.len(),
                self.relu_layer_count()
            )));
        }
        let x = &tape.inputs[0];
        let mut grad = match output_grad {
            Some(g) => {
                if g.shape() != tape.output.shape() {
                    return Err(Error::ShapeMismatch(format!(
                        "output grad {:?} vs output {:?}",
                        g.shape(),
                        tape.output.shape()
                    )));
                }
                g.clone()
            }
            None => Tensor::zeros(tape.output.shape()),
        };
        let mut direct_input_grad = Tensor::zeros(x.shape());
        let mut weight_grads = Vec::new();
        let mut relu_seen = self.relu_layer_count();
        for (layer, input) in self.layers.iter().zip(&tape.inputs).rev() {
            match layer {
                Layer::Conv { kernel, bias: _ } => {
                    if want_weights {
                        let (gi, gk, gb) = conv2d_backward(input, kernel, &grad)?;
                        weight_grads.push((gk, gb));
                        grad = gi;
                    } else {
                        grad = conv_input_gradient(input.shape(), kernel, &grad)?;
                    }
                }
                Layer::Relu => {
                    relu_seen -= 1;
                    if let Some(tap) = taps.get(relu_seen) {
                        grad = grad.add(tap)?;
                    }
                    grad = relu_backward(input, &grad)?;
                }
                Layer::ResidualAddInput => {
                    direct_input_grad = direct_input_grad.add(&grad)?;
                }
                Layer::GlobalResidualNoisePredict => {
                    direct_input_grad = direct_input_grad.add(&grad)?;
                    grad = grad.scale(-1.0);
                }
            }
        }
        weight_grads.reverse();
        Ok((grad.add(&direct_input_grad)?, weight_grads))
    }

    /// Gradient of sum(output * output_grad) with respect to the input.
    pub fn input_gradient(&self, x: &Tensor, output_grad: &Tensor) -> Result<Tensor> {
        let tape = self.run_forward(x, None)?;
        Ok(self.backward(&tape, Some(output_grad), &[], false)?.0)
    }

    /// Like [`input_gradient`], with additional gradient injected at each
    /// post-ReLU activation; `output_grad` may be omitted when the objective
    /// depends only on hidden activations.
    ///
    /// [`input_gradient`]: ImageToImageModel::input_gradient
    pub fn input_gradient_with_taps(
        &self,
        x: &Tensor,
        output_grad: Option<&Tensor>,
        taps: &[Tensor],
    ) -> Result<Tensor> {
        let tape = self.run_forward(x, None)?;
        Ok(self.backward(&tape, output_grad, taps, false)?.0)
    }
}

/// Input gradient of a convolution without accumulating weight gradients;
/// this is the hot path of every attack iteration.
fn conv_input_gradient(
    input_shape: &[usize],
    kernel: &Tensor,
    upstream: &Tensor,
) -> Result<Tensor> {
    let (n, h, w, ci, co, k) = match (input_shape, kernel.shape(), upstream.shape()) {
        (&[n, h, w, ci], &[k, _, kci, co], &[un, uh, uw, uc])
            if kci == ci && (un, uh, uw, uc) == (n, h, w, co) =>
        {
            (n, h, w, ci, co, k)
        }
        (&[h, w, ci], &[k, _, kci, co], &[uh, uw, uc])
            if kci == ci && (uh, uw, uc) == (h, w, co) =>
        {
            (1, h, w, ci, co, k)
        }
        _ => {
            return Err(Error::ShapeMismatch(format!(
                "conv input grad: input {:?}, kernel {:?}, upstream {:?}",
                input_shape,
                kernel.shape(),
                upstream.shape()
            )))
        }
    };
    let pad = (k / 2) as isize;
    let mut gin = Tensor::zeros(input_shape);
    let kd = kernel.data();
    let ud = upstream.data();
    let gid = gin.data_mut();
    for bn in 0..n {
        for y in 0..h {
            for x in 0..w {
                let up = ((bn * h + y) * w + x) * co;
                let up_px = &ud[up..up + co];
                for dy in 0..k {
                    let iy = y as isize + dy as isize - pad;
                    if iy < 0 || iy >= h as isize {
                        continue;
                    }
                    for dx in 0..k {
                        let ix = x as isize + dx as isize - pad;
                        if ix < 0 || ix >= w as isize {
                            continue;
                        }
                        let ip = ((bn * h + iy as usize) * w + ix as usize) * ci;
                        let kp = (dy * k + dx) * ci * co;
                        for c in 0..ci {
                            let krow = &kd[kp + c * co..kp + (c + 1) * co];
                            let mut acc = 0.0;
                            for (o, &u) in up_px.iter().enumerate() {
                                acc += u * krow[o];
                            }
                            gid[ip + c] += acc;
                        }
                    }
                }
            }
        }
    }
    Ok(gin)
}

// --- training ---------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 30,
            batch_size: 16,
            adam: AdamConfig::default(),
        }
    }
}

/// Mean training loss per epoch.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub epoch_loss: Vec<f64>,
}

impl TrainReport {
    /// Moving average of the loss curve over `window` epochs.
    pub fn smoothed_loss(&self, window: usize) -> Vec<f64> {
        let w = window.max(1);
        (0..self.epoch_loss.len())
            .map(|i| {
                let lo = i.saturating_sub(w - 1);
                let slice = &self.epoch_loss[lo..=i];
                slice.iter().sum::<f64>() / slice.len() as f64
            })
            .collect()
    }
}

struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
}

/// First-moment/second-moment step on one parameter buffer.
fn adam_step(params: &mut [f64], grads: &[f64], state: &mut AdamState, cfg: &AdamConfig, t: i32) {
    let b1t = 1.0 - cfg.beta1.powi(t);
    let b2t = 1.0 - cfg.beta2.powi(t);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        let mhat = state.m[i] / b1t;
        let vhat = state.v[i] / b2t;
        params[i] -= cfg.learning_rate * mhat / (vhat.sqrt() + cfg.epsilon);
    }
}

/// Stacks same-shaped [H, W, C] images into an [N, H, W, C] batch.
pub fn stack_batch(images: &[&Tensor]) -> Result<Tensor> {
    let first = images
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty batch".into()))?;
    let shape = first.shape();
    let mut data = Vec::with_capacity(images.len() * first.len());
    for img in images {
        if img.shape() != shape {
            return Err(Error::ShapeMismatch(format!(
                "batch mixes {:?} and {:?}",
                shape,
                img.shape()
            )));
        }
        data.extend_from_slice(img.data());
    }
    let mut bshape = vec![images.len()];
    bshape.extend_from_slice(shape);
    Tensor::from_vec(&bshape, data)
}

/// Hook called on each batch before the loss is computed; used to swap a
/// prefix of the batch inputs for perturbed copies.
pub type BatchHook<'a> =
    dyn FnMut(&ImageToImageModel, &mut Vec<Tensor>, &[Tensor]) -> Result<()> + 'a;

/// Minimizes mean squared error over (input, target) pairs with Adam.
///
/// Shuffling and any batch hook perturbations draw from `rng`, so a seed
/// pins the whole trajectory. Returns the per-epoch loss curve; a non-finite
/// loss aborts with a numeric error.
pub fn train(
    model: &mut ImageToImageModel,
    pairs: &[(Tensor, Tensor)],
    cfg: &TrainConfig,
    rng: &mut Rng,
    mut batch_hook: Option<&mut BatchHook<'_>>,
) -> Result<TrainReport> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("training set is empty".into()));
    }
    if cfg.batch_size == 0 || cfg.epochs == 0 {
        return Err(Error::InvalidArgument(
            "epochs and batch size must be nonzero".into(),
        ));
    }
    let mut states: Vec<(AdamState, AdamState)> = model
        .layers
        .iter()
        .filter_map(|l| match l {
            Layer::Conv { kernel, bias } => Some((
                AdamState {
                    m: vec![0.0; kernel.len()],
                    v: vec![0.0; kernel.len()],
                },
                AdamState {
                    m: vec![0.0; bias.len()],
                    v: vec![0.0; bias.len()],
                },
            )),
            _ => None,
        })
        .collect();

    let mut order: Vec<usize> = (0..pairs.len()).collect();
    let mut epoch_loss = Vec::with_capacity(cfg.epochs);
    let mut step = 0i32;
    for epoch in 0..cfg.epochs {
        rng.shuffle(&mut order);
        let mut loss_sum = 0.0;
        let mut batches = 0usize;
        for chunk in order.chunks(cfg.batch_size) {
            let mut inputs: Vec<Tensor> = chunk.iter().map(|&i| pairs[i].0.clone()).collect();
            let targets: Vec<Tensor> = chunk.iter().map(|&i| pairs[i].1.clone()).collect();
            if let Some(hook) = batch_hook.as_deref_mut() {
                hook(model, &mut inputs, &targets)?;
            }
            let batch_in = stack_batch(&inputs.iter().collect::<Vec<_>>())?;
            let batch_tgt = stack_batch(&targets.iter().collect::<Vec<_>>())?;

            let tape = model.run_forward(&batch_in, None)?;
            let diff = tape.output.sub(&batch_tgt)?;
            let count = diff.len() as f64;
            let loss = diff.data().iter().map(|v| v * v).sum::<f64>() / count;
            if !loss.is_finite() {
                return Err(Error::Numeric(format!(
                    "training diverged: loss {loss} at epoch {epoch}, step {step}"
                )));
            }
            loss_sum += loss;
            batches += 1;
            let out_grad = diff.scale(2.0 / count);
            let (_, weight_grads) = model.backward(&tape, Some(&out_grad), &[], true)?;

            step += 1;
            let mut wi = 0;
            for layer in &mut model.layers {
                if let Layer::Conv { kernel, bias } = layer {
                    let (gk, gb) = &weight_grads[wi];
                    let (ks, bs) = &mut states[wi];
                    adam_step(kernel.data_mut(), gk.data(), ks, &cfg.adam, step);
                    adam_step(bias, gb, bs, &cfg.adam, step);
                    wi += 1;
                }
            }
        }
        epoch_loss.push(loss_sum / batches as f64);
    }
    Ok(TrainReport { epoch_loss })
}

// --- weight files -----------------------------------------------------------

const MAGIC: [u8; 4] = *b"I2IW";
const VERSION: u32 = 1;

fn kind_tag(kind: LayerKind) -> u8 {
    match kind {
        LayerKind::Conv3x3 => 0,
        LayerKind::Relu => 1,
        LayerKind::ResidualAddInput => 2,
        LayerKind::GlobalResidualNoisePredict => 3,
    }
}

/// Writes the layer stack: magic, version, layer count, then per layer a
/// kind tag, four u32 dims, the row-major kernel as little-endian f64, and
/// the biases. Weightless layers store zero dims and no payload.
pub fn save_weights(model: &ImageToImageModel, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(model.layers.len() as u32).to_le_bytes())?;
    for layer in &model.layers {
        w.write_all(&[kind_tag(layer.kind())])?;
        match layer {
            Layer::Conv { kernel, bias } => {
                for &d in kernel.shape() {
                    w.write_all(&(d as u32).to_le_bytes())?;
                }
                for &v in kernel.data() {
                    w.write_all(&v.to_le_bytes())?;
                }
                for &v in bias {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
            _ => {
                for _ in 0..4 {
                    w.write_all(&0u32.to_le_bytes())?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

struct Cursor<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> Cursor<R> {
    fn take(&mut self, buf: &mut [u8], what: &str) -> Result<()> {
        let at = self.offset;
        self.inner.read_exact(buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::UnexpectedEof {
                Error::WeightFormat {
                    offset: at,
                    reason: format!("file ends inside {what}"),
                }
            } else {
                Error::Io(e)
            }
        })?;
        self.offset += buf.len() as u64;
        Ok(())
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let mut b = [0u8; 4];
        self.take(&mut b, what)?;
        Ok(u32::from_le_bytes(b))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        let mut b = [0u8; 8];
        self.take(&mut b, what)?;
        Ok(f64::from_le_bytes(b))
    }
}

/// Reads a file produced by [`save_weights`]. The degradation parameters are
/// not stored, so the task is inferred from the skip-wiring layer and carries
/// default parameters; use [`ImageToImageModel::with_task`] to reattach the
/// exact task.
pub fn load_weights(path: &Path) -> Result<ImageToImageModel> {
    let file = std::fs::File::open(path)?;
    let mut c = Cursor {
        inner: std::io::BufReader::new(file),
        offset: 0,
    };
    let mut magic = [0u8; 4];
    c.take(&mut magic, "magic")?;
    if magic != MAGIC {
        return Err(Error::WeightFormat {
            offset: 0,
            reason: format!("bad magic {magic:?}"),
        });
    }
    let version = c.u32("version")?;
    if version != VERSION {
        return Err(Error::WeightFormat {
            offset: 4,
            reason: format!("unsupported version {version}"),
        });
    }
    let count = c.u32("layer count")? as usize;
    let mut layers = Vec::with_capacity(count);
    for li in 0..count {
        let at = c.offset;
        let mut tag = [0u8; 1];
        c.take(&mut tag, "layer kind")?;
        let mut dims = [0usize; 4];
        for d in &mut dims {
            *d = c.u32("layer dims")? as usize;
        }
        let layer = match tag[0] {
            0 => {
                let [kh, kw, ci, co] = dims;
                if kh != kw || kh % 2 == 0 || kh == 0 || ci == 0 || co == 0 {
                    return Err(Error::WeightFormat {
                        offset: at,
                        reason: format!("layer {li}: bad conv dims {dims:?}"),
                    });
                }
                let n = kh * kw * ci * co;
                let mut data = Vec::with_capacity(n);
                for _ in 0..n {
                    data.push(c.f64("kernel payload")?);
                }
                let mut bias = Vec::with_capacity(co);
                for _ in 0..co {
                    bias.push(c.f64("bias payload")?);
                }
                Layer::Conv {
                    kernel: Tensor::from_vec(&[kh, kw, ci, co], data).unwrap(),
                    bias,
                }
            }
            1..=3 => {
                if dims != [0; 4] {
                    return Err(Error::WeightFormat {
                        offset: at,
                        reason: format!("layer {li}: weightless layer with dims {dims:?}"),
                    });
                }
                match tag[0] {
                    1 => Layer::Relu,
                    2 => Layer::ResidualAddInput,
                    _ => Layer::GlobalResidualNoisePredict,
                }
            }
            t => {
                return Err(Error::WeightFormat {
                    offset: at,
                    reason: format!("layer {li}: unknown kind tag {t}"),
                });
            }
        };
        layers.push(layer);
    }
    let mut trailing = [0u8; 1];
    if c.inner.read(&mut trailing)? != 0 {
        return Err(Error::WeightFormat {
            offset: c.offset,
            reason: "trailing bytes after last layer".into(),
        });
    }
    validate_stack(&layers)?;
    let task = match layers.last() {
        Some(Layer::GlobalResidualNoisePredict) => Task::denoise_default(),
        _ => Task::super_resolve_default(),
    };
    Ok(ImageToImageModel { task, layers })
}

fn validate_stack(layers: &[Layer]) -> Result<()> {
    if layers.is_empty() {
        return Err(Error::InvalidArgument("empty layer stack".into()));
    }
    for (i, layer) in layers.iter().enumerate() {
        let skip = matches!(
            layer,
            Layer::ResidualAddInput | Layer::GlobalResidualNoisePredict
        );
        if skip && i + 1 != layers.len() {
            return Err(Error::InvalidArgument(format!(
                "skip wiring must be the final layer, found at {i}"
            )));
        }
    }
    Ok(())
}

/// Byte length [`save_weights`] will produce for a model.
pub fn weight_file_len(model: &ImageToImageModel) -> u64 {
    let mut len = 4 + 4 + 4u64;
    for layer in &model.layers {
        len += 1 + 16;
        if let Layer::Conv { kernel, bias } = layer {
            len += 8 * (kernel.len() as u64 + bias.len() as u64);
        }
    }
    len
}
