use rand::Rng;

use super::kernels::{outer_sum, rows_dot, rows_times};
use super::spec::{Activation, LayerSpec, NetworkSpec, Plan, Shape};
use super::NeuralError;
use crate::scalar::Real;

/// Parameters of one network, stored as a single flat vector.
///
/// Each parameterised layer owns a contiguous run: weights first (row-major,
/// `fan_in x units`), then biases.
#[derive(Clone, Debug)]
pub struct Network<R: Real> {
    spec: NetworkSpec,
    plan: Plan,
    params: Vec<R>,
    version: u64,
}

/// Activations kept from a forward pass for the matching backward pass.
#[derive(Clone, Debug)]
pub struct Cache<R: Real> {
    batch: usize,
    version: u64,
    /// `acts[0]` is the input, `acts[i + 1]` the output of layer `i`.
    acts: Vec<Vec<R>>,
    /// im2col patches of convolution layers.
    cols: Vec<Option<Vec<R>>>,
}

impl<R: Real> Cache<R> {
    pub fn batch(&self) -> usize {
        self.batch
    }

    /// Final-layer output, `batch x output_len` row-major.
    pub fn output(&self) -> &[R] {
        self.acts.last().expect("cache holds the input at least")
    }
}

/// Result of a backward pass beyond the parameter gradients.
#[derive(Clone, Debug, Default)]
pub struct InputGrads<R> {
    /// Gradient with respect to the primary input, if requested.
    pub input: Option<Vec<R>>,
    /// Gradient with respect to the auxiliary input, for specs with a concat.
    pub aux: Option<Vec<R>>,
}

impl<R: Real> Network<R> {
    /// All-zero parameters.
    pub fn zeros(spec: NetworkSpec) -> Result<Self, NeuralError> {
        let plan = spec.plan()?;
        let params = vec![R::zero(); plan.n_params];
        Ok(Self { spec, plan, params, version: 0 })
    }

    /// Uniform fan-in initialisation, `U(-1/sqrt(fan_in), 1/sqrt(fan_in))`
    /// for weights and biases alike.
    pub fn init<G: Rng + ?Sized>(spec: NetworkSpec, rng: &mut G) -> Result<Self, NeuralError> {
        let mut net = Self::zeros(spec)?;
        for i in 0..net.plan.offsets.len() {
            let n = net.plan.weights[i] + net.plan.biases[i];
            if n == 0 {
                continue;
            }
            let bound = 1.0 / (net.plan.fan_in[i] as f64).sqrt();
            let off = net.plan.offsets[i];
            for p in &mut net.params[off..off + n] {
                *p = R::lit(rng.random_range(-bound..bound));
            }
        }
        Ok(net)
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn input_len(&self) -> usize {
        self.spec.input.len()
    }

    pub fn output_len(&self) -> usize {
        self.plan.outputs.last().map_or(self.spec.input.len(), Shape::len)
    }

    pub fn params(&self) -> &[R] {
        &self.params
    }

    /// Mutable parameter access; invalidates outstanding caches.
    pub fn params_mut(&mut self) -> &mut [R] {
        self.version += 1;
        &mut self.params
    }

    /// Overwrites this network's parameters with `src`'s.
    pub fn copy_from(&mut self, src: &Network<R>) {
        assert_eq!(self.spec, src.spec, "copy between different architectures");
        self.params.copy_from_slice(&src.params);
        self.version += 1;
    }

    /// Runs a batch. `input` is `batch x input_len`, `aux` is
    /// `batch x aux_len` when the spec declares an auxiliary input.
    pub fn forward(&self, input: &[R], aux: Option<&[R]>, batch: usize) -> Result<Cache<R>, NeuralError> {
        let expect = batch * self.input_len();
        if input.len() != expect {
            return Err(NeuralError::ShapeMismatch { expected: expect, found: input.len() });
        }
        let aux_len = batch * self.spec.aux;
        match aux {
            Some(a) if a.len() != aux_len => {
                return Err(NeuralError::ShapeMismatch { expected: aux_len, found: a.len() });
            }
            None if aux_len > 0 => return Err(NeuralError::ShapeMismatch { expected: aux_len, found: 0 }),
            _ => {}
        }
        let mut acts = Vec::with_capacity(self.spec.layers.len() + 1);
        let mut cols = Vec::with_capacity(self.spec.layers.len());
        acts.push(input.to_vec());
        for (i, layer) in self.spec.layers.iter().enumerate() {
            let x = acts.last().expect("input pushed");
            let (out, col) = self.layer_forward(i, layer, x, aux.unwrap_or(&[]), batch);
            acts.push(out);
            cols.push(col);
        }
        Ok(Cache { batch, version: self.version, acts, cols })
    }

    /// Forward pass that keeps only the output.
    pub fn predict(&self, input: &[R], aux: Option<&[R]>, batch: usize) -> Result<Vec<R>, NeuralError> {
        let mut cache = self.forward(input, aux, batch)?;
        Ok(cache.acts.pop().expect("output present"))
    }

    fn weights(&self, i: usize) -> (&[R], &[R]) {
        let off = self.plan.offsets[i];
        let w = self.plan.weights[i];
        let b = self.plan.biases[i];
        (&self.params[off..off + w], &self.params[off + w..off + w + b])
    }

    fn layer_forward(&self, i: usize, layer: &LayerSpec, x: &[R], aux: &[R], batch: usize) -> (Vec<R>, Option<Vec<R>>) {
        let out_len = self.plan.outputs[i].len();
        let mut out = vec![R::zero(); batch * out_len];
        match *layer {
            LayerSpec::Conv { filters, kernel, stride, act } => {
                let Shape::Spatial(h, w, c) = self.plan.inputs[i] else { unreachable!("checked by plan") };
                let Shape::Spatial(oh, ow, _) = self.plan.outputs[i] else { unreachable!("checked by plan") };
                let patch = kernel * kernel * c;
                let col = im2col(x, batch, (h, w, c), kernel, stride, (oh, ow));
                let (wt, b) = self.weights(i);
                for row in out.chunks_exact_mut(filters) {
                    row.copy_from_slice(b);
                }
                rows_times(&col, patch, wt, filters, &mut out);
                activate(&mut out, act);
                (out, Some(col))
            }
            LayerSpec::Dense { units, act } => {
                let fan = self.plan.inputs[i].len();
                let (wt, b) = self.weights(i);
                for row in out.chunks_exact_mut(units) {
                    row.copy_from_slice(b);
                }
                rows_times(x, fan, wt, units, &mut out);
                activate(&mut out, act);
                (out, None)
            }
            LayerSpec::Concat => {
                let n = self.plan.inputs[i].len();
                let a = self.spec.aux;
                for s in 0..batch {
                    out[s * out_len..s * out_len + n].copy_from_slice(&x[s * n..(s + 1) * n]);
                    out[s * out_len + n..(s + 1) * out_len].copy_from_slice(&aux[s * a..(s + 1) * a]);
                }
                (out, None)
            }
            LayerSpec::Scale(k) => {
                let k = R::lit(k);
                for (o, &v) in out.iter_mut().zip(x) {
                    *o = v * k;
                }
                (out, None)
            }
        }
    }

    /// Backpropagates `d_out` (gradient of the loss with respect to the
    /// output) through the cached pass.
    ///
    /// Parameter gradients are written into `grads` when given, overwriting
    /// previous contents. Set `want_input` to also receive the gradient with
    /// respect to the primary input; the auxiliary-input gradient is
    /// returned whenever the spec has a concat layer.
    pub fn backward(
        &self,
        cache: &Cache<R>,
        d_out: &[R],
        mut grads: Option<&mut [R]>,
        want_input: bool,
    ) -> Result<InputGrads<R>, NeuralError> {
        if cache.version != self.version || cache.acts.len() != self.spec.layers.len() + 1 {
            return Err(NeuralError::StaleCache);
        }
        if d_out.len() != cache.output().len() {
            return Err(NeuralError::ShapeMismatch { expected: cache.output().len(), found: d_out.len() });
        }
        if let Some(g) = grads.as_deref() {
            if g.len() != self.params.len() {
                return Err(NeuralError::ShapeMismatch { expected: self.params.len(), found: g.len() });
            }
        }
        let batch = cache.batch;
        let concat_at = self.spec.layers.iter().position(|l| matches!(l, LayerSpec::Concat));
        let mut result = InputGrads::default();
        let mut d = d_out.to_vec();
        for i in (0..self.spec.layers.len()).rev() {
            let need_dx = i > 0 || want_input;
            let below_concat = concat_at.is_none_or(|c| i < c);
            if grads.is_none() && !want_input && below_concat {
                break;
            }
            let x = &cache.acts[i];
            let y = &cache.acts[i + 1];
            d = match self.spec.layers[i] {
                LayerSpec::Conv { filters, kernel, stride, act } => {
                    activate_grad(&mut d, y, act);
                    let Shape::Spatial(h, w, c) = self.plan.inputs[i] else { unreachable!() };
                    let Shape::Spatial(oh, ow, _) = self.plan.outputs[i] else { unreachable!() };
                    let patch = kernel * kernel * c;
                    let rows = batch * oh * ow;
                    let col = cache.cols[i].as_ref().expect("conv caches patches");
                    if let Some(g) = grads.as_deref_mut() {
                        let off = self.plan.offsets[i];
                        let nw = self.plan.weights[i];
                        let (gw, gb) = g[off..off + nw + filters].split_at_mut(nw);
                        outer_sum(col, patch, &d, filters, gw);
                        bias_grad(&d, filters, gb);
                    }
                    if need_dx {
                        let (wt, _) = self.weights(i);
                        let mut dcol = vec![R::zero(); rows * patch];
                        rows_dot(&d, filters, wt, &mut dcol);
                        col2im(&dcol, batch, (h, w, c), kernel, stride, (oh, ow))
                    } else {
                        Vec::new()
                    }
                }
                LayerSpec::Dense { units, act } => {
                    activate_grad(&mut d, y, act);
                    let fan = self.plan.inputs[i].len();
                    if let Some(g) = grads.as_deref_mut() {
                        let off = self.plan.offsets[i];
                        let nw = self.plan.weights[i];
                        let (gw, gb) = g[off..off + nw + units].split_at_mut(nw);
                        outer_sum(x, fan, &d, units, gw);
                        bias_grad(&d, units, gb);
                    }
                    if need_dx {
                        let (wt, _) = self.weights(i);
                        let mut dx = vec![R::zero(); batch * fan];
                        rows_dot(&d, units, wt, &mut dx);
                        dx
                    } else {
                        Vec::new()
                    }
                }
                LayerSpec::Concat => {
                    let n = self.plan.inputs[i].len();
                    let a = self.spec.aux;
                    let width = n + a;
                    let mut dx = Vec::with_capacity(batch * n);
                    let mut da = Vec::with_capacity(batch * a);
                    for row in d.chunks_exact(width) {
                        dx.extend_from_slice(&row[..n]);
                        da.extend_from_slice(&row[n..]);
                    }
                    result.aux = Some(da);
                    dx
                }
                LayerSpec::Scale(k) => {
                    let k = R::lit(k);
                    d.iter_mut().for_each(|v| *v *= k);
                    d
                }
            };
            if i == 0 && want_input {
                result.input = Some(std::mem::take(&mut d));
            }
        }
        Ok(result)
    }
}

fn activate<R: Real>(v: &mut [R], act: Activation) {
    match act {
        Activation::Relu => v.iter_mut().for_each(|x| *x = x.max(R::zero())),
        Activation::Tanh => v.iter_mut().for_each(|x| *x = x.tanh()),
        Activation::Linear => {}
    }
}

/// Multiplies `d` by the activation derivative, expressed via the output `y`.
fn activate_grad<R: Real>(d: &mut [R], y: &[R], act: Activation) {
    match act {
        Activation::Relu => d.iter_mut().zip(y).for_each(|(g, &o)| {
            if o <= R::zero() {
                *g = R::zero();
            }
        }),
        Activation::Tanh => d.iter_mut().zip(y).for_each(|(g, &o)| *g *= R::one() - o * o),
        Activation::Linear => {}
    }
}

fn bias_grad<R: Real>(d: &[R], units: usize, out: &mut [R]) {
    out.iter_mut().for_each(|v| *v = R::zero());
    for row in d.chunks_exact(units) {
        for (o, &g) in out.iter_mut().zip(row) {
            *o += g;
        }
    }
}

/// Gathers valid-padding patches; row `(n, oy, ox)` holds the
/// `kernel x kernel x c` window in `(ky, kx, channel)` order.
fn im2col<R: Real>(
    x: &[R],
    batch: usize,
    (h, w, c): (usize, usize, usize),
    k: usize,
    s: usize,
    (oh, ow): (usize, usize),
) -> Vec<R> {
    let patch = k * k * c;
    let run = k * c;
    let mut col = vec![R::zero(); batch * oh * ow * patch];
    let mut dst = 0;
    for n in 0..batch {
        let img = &x[n * h * w * c..(n + 1) * h * w * c];
        for oy in 0..oh {
            for ox in 0..ow {
                for ky in 0..k {
                    let src = ((oy * s + ky) * w + ox * s) * c;
                    col[dst..dst + run].copy_from_slice(&img[src..src + run]);
                    dst += run;
                }
            }
        }
    }
    col
}

/// Adjoint of `im2col`: scatter-adds patch gradients back onto the image.
fn col2im<R: Real>(
    dcol: &[R],
    batch: usize,
    (h, w, c): (usize, usize, usize),
    k: usize,
    s: usize,
    (oh, ow): (usize, usize),
) -> Vec<R> {
    let run = k * c;
    let mut dx = vec![R::zero(); batch * h * w * c];
    let mut src = 0;
    for n in 0..batch {
        let img = &mut dx[n * h * w * c..(n + 1) * h * w * c];
        for oy in 0..oh {
            for ox in 0..ow {
                for ky in 0..k {
                    let dst = ((oy * s + ky) * w + ox * s) * c;
                    for (o, &g) in img[dst..dst + run].iter_mut().zip(&dcol[src..src + run]) {
                        *o += g;
                    }
                    src += run;
                }
            }
        }
    }
    dx
}
