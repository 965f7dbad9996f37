//! TinyConvNet: the configurable convolutional backbone.
//!
//! A stack of [conv k=3, stride 1 -> ReLU -> 2x2 max pool] blocks. The final
//! feature tensor is what the competing heads consume: flattened for the
//! quantum head, globally pooled for the classical one.

use rand::Rng;

use crate::error::{Error, Result};
use crate::nn::conv::{conv2d_backward, conv2d_forward, relu, relu_backward, ConvKernels};
use crate::nn::pool::{pool2d, pool2d_backward, PoolMode};
use crate::nn::tensor::FeatureTensor;

const KERNEL: usize = 3;
const POOL: PoolMode = PoolMode::Max;

#[derive(Clone, Debug, PartialEq)]
pub struct TinyConvNet {
    blocks: Vec<ConvKernels>,
}

/// Intermediate activations kept for the backward pass.
pub struct BackboneTrace {
    conv_inputs: Vec<FeatureTensor>,
    pre_relu: Vec<FeatureTensor>,
    relu_out: Vec<FeatureTensor>,
}

impl TinyConvNet {
    /// One block per entry of `widths`, Glorot-initialized from `rng`.
    pub fn new<R: Rng>(in_channels: usize, widths: &[usize], rng: &mut R) -> Result<Self> {
        if widths.is_empty() {
            return Err(Error::Config("backbone needs at least one block".into()));
        }
        if widths.iter().any(|&w| w == 0) {
            return Err(Error::Config("backbone channel widths must be >= 1".into()));
        }
        let mut blocks = Vec::with_capacity(widths.len());
        let mut c_in = in_channels;
        for &c_out in widths {
            blocks.push(ConvKernels::glorot(c_out, c_in, KERNEL, rng));
            c_in = c_out;
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[ConvKernels] {
        &self.blocks
    }

    /// Shape of the feature tensor this backbone emits for a given input.
    pub fn output_shape(&self, input: (usize, usize, usize)) -> Result<(usize, usize, usize)> {
        let (mut c, mut h, mut w) = input;
        for block in &self.blocks {
            if block.in_channels != c {
                return Err(Error::Shape(format!(
                    "backbone block expects {} channels, got {c}",
                    block.in_channels
                )));
            }
            if h < KERNEL || w < KERNEL {
                return Err(Error::Shape(format!("input {h}x{w} too small for a {KERNEL}x{KERNEL} conv")));
            }
            c = block.out_channels;
            h -= KERNEL - 1;
            w -= KERNEL - 1;
            if h < 2 || w < 2 {
                return Err(Error::Shape(format!("map {h}x{w} too small for 2x2 pooling")));
            }
            h /= 2;
            w /= 2;
        }
        Ok((c, h, w))
    }

    pub fn forward(&self, image: &FeatureTensor) -> Result<FeatureTensor> {
        let (out, _) = self.forward_trace(image)?;
        Ok(out)
    }

    /// Forward pass that keeps every intermediate needed by [`Self::backward`].
    pub fn forward_trace(&self, image: &FeatureTensor) -> Result<(FeatureTensor, BackboneTrace)> {
        let mut trace = BackboneTrace {
            conv_inputs: Vec::with_capacity(self.blocks.len()),
            pre_relu: Vec::with_capacity(self.blocks.len()),
            relu_out: Vec::with_capacity(self.blocks.len()),
        };
        let mut current = image.clone();
        for block in &self.blocks {
            let convolved = conv2d_forward(&current, block, 1)?;
            let activated = relu(&convolved);
            let pooled = pool2d(&activated, POOL)?;
            trace.conv_inputs.push(current);
            trace.pre_relu.push(convolved);
            trace.relu_out.push(activated);
            current = pooled;
        }
        Ok((current, trace))
    }

    /// Kernel gradients per block, given the gradient at the backbone output.
    pub fn backward(&self, trace: &BackboneTrace, upstream: &FeatureTensor) -> Result<Vec<Vec<f64>>> {
        let mut d_blocks = vec![Vec::new(); self.blocks.len()];
        let mut grad = upstream.clone();
        for (idx, block) in self.blocks.iter().enumerate().rev() {
            let grad_pre_pool = pool2d_backward(&trace.relu_out[idx], POOL, &grad)?;
            let grad_pre_relu = relu_backward(&trace.pre_relu[idx], &grad_pre_pool)?;
            let (d_k, d_in) = conv2d_backward(&trace.conv_inputs[idx], block, 1, &grad_pre_relu)?;
            d_blocks[idx] = d_k;
            grad = d_in;
        }
        Ok(d_blocks)
    }

    pub fn n_params(&self) -> usize {
        self.blocks.iter().map(ConvKernels::len).sum()
    }

    /// Kernel data of all blocks, concatenated in block order.
    pub fn params_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_params());
        for block in &self.blocks {
            out.extend_from_slice(&block.data);
        }
        out
    }

    /// Overwrite kernels from a flat vector laid out like [`Self::params_flat`].
    pub fn set_params_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.n_params() {
            return Err(Error::Shape(format!(
                "backbone has {} parameters, got {}",
                self.n_params(),
                flat.len()
            )));
        }
        let mut offset = 0;
        for block in &mut self.blocks {
            let len = block.data.len();
            block.data.copy_from_slice(&flat[offset..offset + len]);
            offset += len;
        }
        Ok(())
    }
}
