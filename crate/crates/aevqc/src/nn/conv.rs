//! Valid-padding 2D convolution (cross-correlation, no kernel flip) and ReLU.

use rand::Rng;

use crate::error::{Error, Result};
use crate::nn::tensor::FeatureTensor;

/// A bank of K kernels of shape C x k x k, row-major over (out, in, kh, kw).
#[derive(Clone, Debug, PartialEq)]
pub struct ConvKernels {
    pub out_channels: usize,
    pub in_channels: usize,
    pub k: usize,
    pub data: Vec<f64>,
}

impl ConvKernels {
    pub fn new(out_channels: usize, in_channels: usize, k: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != out_channels * in_channels * k * k {
            return Err(Error::Shape(format!(
                "kernel bank {out_channels}x{in_channels}x{k}x{k} needs {} values, got {}",
                out_channels * in_channels * k * k,
                data.len()
            )));
        }
        Ok(Self { out_channels, in_channels, k, data })
    }

    /// Glorot-uniform init: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
    pub fn glorot<R: Rng>(out_channels: usize, in_channels: usize, k: usize, rng: &mut R) -> Self {
        let fan_in = (in_channels * k * k) as f64;
        let fan_out = (out_channels * k * k) as f64;
        let a = (6.0 / (fan_in + fan_out)).sqrt();
        let data = (0..out_channels * in_channels * k * k)
            .map(|_| rng.gen_range(-a..a))
            .collect();
        Self { out_channels, in_channels, k, data }
    }

    #[inline]
    fn at(&self, o: usize, c: usize, kh: usize, kw: usize) -> f64 {
        self.data[((o * self.in_channels + c) * self.k + kh) * self.k + kw]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

fn output_side(input: usize, k: usize, stride: usize) -> usize {
    (input - k) / stride + 1
}

/// Valid cross-correlation: output dims floor((H - k)/stride) + 1 by
/// floor((W - k)/stride) + 1. No padding, no kernel flip.
pub fn conv2d_forward(
    input: &FeatureTensor,
    kernels: &ConvKernels,
    stride: usize,
) -> Result<FeatureTensor> {
    let (c_in, h, w) = input.shape();
    if kernels.in_channels != c_in {
        return Err(Error::Shape(format!(
            "kernels expect {} input channels, tensor has {c_in}",
            kernels.in_channels
        )));
    }
    if kernels.k > h || kernels.k > w {
        return Err(Error::Shape(format!(
            "kernel size {} exceeds input {h}x{w}",
            kernels.k
        )));
    }
    if stride == 0 {
        return Err(Error::Shape("stride must be >= 1".into()));
    }
    let (oh, ow) = (output_side(h, kernels.k, stride), output_side(w, kernels.k, stride));
    let mut out = FeatureTensor::zeros(kernels.out_channels, oh, ow);
    for o in 0..kernels.out_channels {
        for i in 0..oh {
            for j in 0..ow {
                let mut acc = 0.0;
                for c in 0..c_in {
                    for kh in 0..kernels.k {
                        for kw in 0..kernels.k {
                            acc += input.get(c, i * stride + kh, j * stride + kw)
                                * kernels.at(o, c, kh, kw);
                        }
                    }
                }
                out.set(o, i, j, acc);
            }
        }
    }
    Ok(out)
}

/// Gradients of a conv forward: (d_kernels laid out like `kernels.data`,
/// d_input shaped like `input`).
pub fn conv2d_backward(
    input: &FeatureTensor,
    kernels: &ConvKernels,
    stride: usize,
    upstream: &FeatureTensor,
) -> Result<(Vec<f64>, FeatureTensor)> {
    let (c_in, h, w) = input.shape();
    let (oh, ow) = (output_side(h, kernels.k, stride), output_side(w, kernels.k, stride));
    if upstream.shape() != (kernels.out_channels, oh, ow) {
        return Err(Error::Shape(format!(
            "upstream shape {:?} does not match conv output {:?}",
            upstream.shape(),
            (kernels.out_channels, oh, ow)
        )));
    }
    let mut d_kernels = vec![0.0; kernels.data.len()];
    let mut d_input = FeatureTensor::zeros(c_in, h, w);
    for o in 0..kernels.out_channels {
        for i in 0..oh {
            for j in 0..ow {
                let g = upstream.get(o, i, j);
                if g == 0.0 {
                    continue;
                }
                for c in 0..c_in {
                    for kh in 0..kernels.k {
                        for kw in 0..kernels.k {
                            let (ih, iw) = (i * stride + kh, j * stride + kw);
                            d_kernels
                                [((o * c_in + c) * kernels.k + kh) * kernels.k + kw] +=
                                g * input.get(c, ih, iw);
                            d_input.add_assign(c, ih, iw, g * kernels.at(o, c, kh, kw));
                        }
                    }
                }
            }
        }
    }
    Ok((d_kernels, d_input))
}

pub fn relu(input: &FeatureTensor) -> FeatureTensor {
    let (c, h, w) = input.shape();
    let mut out = FeatureTensor::zeros(c, h, w);
    for (o, &v) in out.values_mut().iter_mut().zip(input.values()) {
        *o = v.max(0.0);
    }
    out
}

/// Upstream gradient masked by the forward input's sign (0 where input <= 0).
pub fn relu_backward(input: &FeatureTensor, upstream: &FeatureTensor) -> Result<FeatureTensor> {
    if input.shape() != upstream.shape() {
        return Err(Error::Shape("relu backward shapes differ".into()));
    }
    let (c, h, w) = input.shape();
    let mut out = FeatureTensor::zeros(c, h, w);
    for ((o, &v), &g) in out.values_mut().iter_mut().zip(input.values()).zip(upstream.values()) {
        *o = if v > 0.0 { g } else { 0.0 };
    }
    Ok(out)
}
