use std::fmt;

use sha2::{Digest, Sha256};

use super::NeuralError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Activation {
    Relu,
    Tanh,
    Linear,
}

impl Activation {
    fn tag(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Tanh => "tanh",
            Activation::Linear => "linear",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LayerSpec {
    /// Valid-padding square convolution over a channel-last image.
    Conv {
        filters: usize,
        kernel: usize,
        stride: usize,
        act: Activation,
    },
    Dense {
        units: usize,
        act: Activation,
    },
    /// Appends the auxiliary input vector to the flattened activations.
    Concat,
    /// Multiplies by a constant; used to scale a tanh head.
    Scale(f64),
}

/// Activation tensor shape; spatial shapes are `(height, width, channels)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Spatial(usize, usize, usize),
    Flat(usize),
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::Spatial(h, w, c) => h * w * c,
            Shape::Flat(n) => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Architecture description: input shapes and an ordered layer list.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    pub input: Shape,
    pub aux: usize,
    pub layers: Vec<LayerSpec>,
}

/// Per-layer sizes resolved from a spec.
#[derive(Clone, Debug)]
pub(crate) struct Plan {
    pub inputs: Vec<Shape>,
    pub outputs: Vec<Shape>,
    /// Offset of each layer's weights in the flat parameter vector.
    pub offsets: Vec<usize>,
    /// Weight count per layer; biases follow the weights.
    pub weights: Vec<usize>,
    pub biases: Vec<usize>,
    pub fan_in: Vec<usize>,
    pub n_params: usize,
}

impl NetworkSpec {
    pub fn new(input: Shape, aux: usize, layers: Vec<LayerSpec>) -> Self {
        Self { input, aux, layers }
    }

    pub fn output_len(&self) -> usize {
        self.plan().map(|p| p.outputs.last().map_or(self.input.len(), Shape::len)).unwrap_or(0)
    }

    pub(crate) fn plan(&self) -> Result<Plan, NeuralError> {
        let mut shape = self.input;
        let mut plan = Plan {
            inputs: Vec::new(),
            outputs: Vec::new(),
            offsets: Vec::new(),
            weights: Vec::new(),
            biases: Vec::new(),
            fan_in: Vec::new(),
            n_params: 0,
        };
        let mut concatenated = false;
        for (i, layer) in self.layers.iter().enumerate() {
            let (out, w, b, fan) = match (*layer, shape) {
                (LayerSpec::Conv { filters, kernel, stride, .. }, Shape::Spatial(h, wd, c)) => {
                    if kernel == 0 || stride == 0 || kernel > h || kernel > wd || filters == 0 {
                        return Err(NeuralError::BadSpec(format!("layer {i}: conv does not fit {h}x{wd}")));
                    }
                    let oh = (h - kernel) / stride + 1;
                    let ow = (wd - kernel) / stride + 1;
                    let patch = kernel * kernel * c;
                    (Shape::Spatial(oh, ow, filters), patch * filters, filters, patch)
                }
                (LayerSpec::Conv { .. }, Shape::Flat(_)) => {
                    return Err(NeuralError::BadSpec(format!("layer {i}: conv after flatten")));
                }
                (LayerSpec::Dense { units, .. }, s) => {
                    if units == 0 {
                        return Err(NeuralError::BadSpec(format!("layer {i}: zero units")));
                    }
                    (Shape::Flat(units), s.len() * units, units, s.len())
                }
                (LayerSpec::Concat, s) => {
                    if concatenated || self.aux == 0 {
                        return Err(NeuralError::BadSpec(format!("layer {i}: concat needs one aux input")));
                    }
                    concatenated = true;
                    (Shape::Flat(s.len() + self.aux), 0, 0, 0)
                }
                (LayerSpec::Scale(_), s) => (s, 0, 0, 0),
            };
            plan.inputs.push(shape);
            plan.outputs.push(out);
            plan.offsets.push(plan.n_params);
            plan.weights.push(w);
            plan.biases.push(b);
            plan.fan_in.push(fan);
            plan.n_params += w + b;
            shape = out;
        }
        if self.aux > 0 && !concatenated {
            return Err(NeuralError::BadSpec("aux input declared but never concatenated".into()));
        }
        Ok(plan)
    }

    /// SHA-256 of the canonical text form; checkpoints store it to reject
    /// parameters saved under a different architecture.
    pub fn digest(&self) -> [u8; 32] {
        Sha256::digest(self.to_string().as_bytes()).into()
    }
}

impl fmt::Display for NetworkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.input {
            Shape::Spatial(h, w, c) => write!(f, "in {h}x{w}x{c}")?,
            Shape::Flat(n) => write!(f, "in {n}")?,
        }
        write!(f, " aux {}", self.aux)?;
        for layer in &self.layers {
            match *layer {
                LayerSpec::Conv { filters, kernel, stride, act } => {
                    write!(f, " | conv {filters} k{kernel} s{stride} {}", act.tag())?
                }
                LayerSpec::Dense { units, act } => write!(f, " | dense {units} {}", act.tag())?,
                LayerSpec::Concat => write!(f, " | concat")?,
                LayerSpec::Scale(s) => write!(f, " | scale {s:e}")?,
            }
        }
        Ok(())
    }
}

/// Convolutional trunk shared by the value and policy networks.
fn trunk(concat_action: bool) -> Vec<LayerSpec> {
    let mut layers = vec![
        LayerSpec::Conv { filters: 8, kernel: 3, stride: 2, act: Activation::Relu },
        LayerSpec::Conv { filters: 16, kernel: 3, stride: 2, act: Activation::Relu },
    ];
    if concat_action {
        layers.push(LayerSpec::Concat);
    }
    layers.push(LayerSpec::Dense { units: 128, act: Activation::Relu });
    layers
}

/// Q network over a `side x side x channels` view with `n_actions` outputs.
pub fn q_network_spec(side: usize, channels: usize, n_actions: usize) -> NetworkSpec {
    let mut layers = trunk(false);
    layers.push(LayerSpec::Dense { units: n_actions, act: Activation::Linear });
    NetworkSpec::new(Shape::Spatial(side, side, channels), 0, layers)
}

/// Policy network: two tanh outputs scaled to `max_velocity`.
pub fn actor_spec(side: usize, channels: usize, max_velocity: f64) -> NetworkSpec {
    let mut layers = trunk(false);
    layers.push(LayerSpec::Dense { units: 2, act: Activation::Tanh });
    layers.push(LayerSpec::Scale(max_velocity));
    NetworkSpec::new(Shape::Spatial(side, side, channels), 0, layers)
}

/// Action-value network; the two-element action joins before the dense layer.
pub fn critic_spec(side: usize, channels: usize) -> NetworkSpec {
    let mut layers = trunk(true);
    layers.push(LayerSpec::Dense { units: 1, act: Activation::Linear });
    NetworkSpec::new(Shape::Spatial(side, side, channels), 2, layers)
}

/// Dense-only network for the small wall maps.
pub fn toy_q_spec(input: usize, n_actions: usize) -> NetworkSpec {
    NetworkSpec::new(
        Shape::Flat(input),
        0,
        vec![
            LayerSpec::Dense { units: 128, act: Activation::Relu },
            LayerSpec::Dense { units: 64, act: Activation::Relu },
            LayerSpec::Dense { units: n_actions, act: Activation::Linear },
        ],
    )
}
