//! Bias-free fully connected layer.

use rand::Rng;

use crate::error::{Error, Result};

/// Weights of a bias-free linear map, row-major out x in.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseParams {
    pub out_dim: usize,
    pub in_dim: usize,
    pub weights: Vec<f64>,
}

impl DenseParams {
    pub fn new(out_dim: usize, in_dim: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != out_dim * in_dim {
            return Err(Error::Shape(format!(
                "dense {out_dim}x{in_dim} needs {} weights, got {}",
                out_dim * in_dim,
                weights.len()
            )));
        }
        Ok(Self { out_dim, in_dim, weights })
    }

    pub fn glorot<R: Rng>(out_dim: usize, in_dim: usize, rng: &mut R) -> Self {
        let a = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let weights = (0..out_dim * in_dim).map(|_| rng.gen_range(-a..a)).collect();
        Self { out_dim, in_dim, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// y = W x.
pub fn dense_forward(x: &[f64], p: &DenseParams) -> Result<Vec<f64>> {
    if x.len() != p.in_dim {
        return Err(Error::Shape(format!(
            "dense layer expects {} inputs, got {}",
            p.in_dim,
            x.len()
        )));
    }
    Ok((0..p.out_dim)
        .map(|o| {
            p.weights[o * p.in_dim..(o + 1) * p.in_dim]
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum()
        })
        .collect())
}

/// Gradients (d_weights laid out like `p.weights`, d_x of length in_dim).
pub fn dense_backward(x: &[f64], p: &DenseParams, upstream: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.len() != p.in_dim || upstream.len() != p.out_dim {
        return Err(Error::Shape(format!(
            "dense backward got input {} / upstream {} for a {}x{} layer",
            x.len(),
            upstream.len(),
            p.out_dim,
            p.in_dim
        )));
    }
    let mut d_w = vec![0.0; p.weights.len()];
    let mut d_x = vec![0.0; p.in_dim];
    for (o, &g) in upstream.iter().enumerate() {
        for (i, &v) in x.iter().enumerate() {
            d_w[o * p.in_dim + i] = g * v;
            d_x[i] += g * p.weights[o * p.in_dim + i];
        }
    }
    Ok((d_w, d_x))
}
