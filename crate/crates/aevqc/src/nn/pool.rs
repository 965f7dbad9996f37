//! 2x2 spatial pooling and the global pooling heads.

use crate::error::{Error, Result};
use crate::nn::tensor::FeatureTensor;

/// Aggregation used by both spatial and global pooling. In run configs the
/// global variants are spelled "gap" (average) and "gmp" (max).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoolMode {
    Average,
    Max,
}

/// 2x2 pooling with stride 2. Odd trailing rows/columns are trimmed; a
/// 1-pixel dimension leaves nothing to pool and is a shape error.
pub fn pool2d(input: &FeatureTensor, mode: PoolMode) -> Result<FeatureTensor> {
    let (c, h, w) = input.shape();
    if h < 2 || w < 2 {
        return Err(Error::Shape(format!("cannot 2x2-pool a {h}x{w} map")));
    }
    let (oh, ow) = (h / 2, w / 2);
    let mut out = FeatureTensor::zeros(c, oh, ow);
    for ch in 0..c {
        for i in 0..oh {
            for j in 0..ow {
                let window = [
                    input.get(ch, 2 * i, 2 * j),
                    input.get(ch, 2 * i, 2 * j + 1),
                    input.get(ch, 2 * i + 1, 2 * j),
                    input.get(ch, 2 * i + 1, 2 * j + 1),
                ];
                let v = match mode {
                    PoolMode::Average => window.iter().sum::<f64>() / 4.0,
                    PoolMode::Max => window.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                };
                out.set(ch, i, j, v);
            }
        }
    }
    Ok(out)
}

/// Route `upstream` back through a 2x2 pool: averages spread evenly, maxima
/// go to the first position attaining the max (scan order, deterministic).
pub fn pool2d_backward(
    input: &FeatureTensor,
    mode: PoolMode,
    upstream: &FeatureTensor,
) -> Result<FeatureTensor> {
    let (c, h, w) = input.shape();
    let (oh, ow) = (h / 2, w / 2);
    if upstream.shape() != (c, oh, ow) {
        return Err(Error::Shape(format!(
            "upstream shape {:?} does not match pooled {:?}",
            upstream.shape(),
            (c, oh, ow)
        )));
    }
    let mut out = FeatureTensor::zeros(c, h, w);
    for ch in 0..c {
        for i in 0..oh {
            for j in 0..ow {
                let g = upstream.get(ch, i, j);
                match mode {
                    PoolMode::Average => {
                        for (dh, dw) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                            out.add_assign(ch, 2 * i + dh, 2 * j + dw, g / 4.0);
                        }
                    }
                    PoolMode::Max => {
                        let mut best = (0, 0);
                        let mut best_v = f64::NEG_INFINITY;
                        for (dh, dw) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                            let v = input.get(ch, 2 * i + dh, 2 * j + dw);
                            if v > best_v {
                                best_v = v;
                                best = (dh, dw);
                            }
                        }
                        out.add_assign(ch, 2 * i + best.0, 2 * j + best.1, g);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Collapse each channel to one value over all H*W positions.
pub fn global_pool(input: &FeatureTensor, mode: PoolMode) -> Vec<f64> {
    let (c, h, w) = input.shape();
    (0..c)
        .map(|ch| {
            let slice = &input.values()[ch * h * w..(ch + 1) * h * w];
            match mode {
                PoolMode::Average => slice.iter().sum::<f64>() / (h * w) as f64,
                PoolMode::Max => slice.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect()
}

/// Backward of [`global_pool`]: one upstream value per channel.
pub fn global_pool_backward(
    input: &FeatureTensor,
    mode: PoolMode,
    upstream: &[f64],
) -> Result<FeatureTensor> {
    let (c, h, w) = input.shape();
    if upstream.len() != c {
        return Err(Error::Shape(format!(
            "global pool upstream has {} entries for {c} channels",
            upstream.len()
        )));
    }
    let mut out = FeatureTensor::zeros(c, h, w);
    for (ch, &g) in upstream.iter().enumerate() {
        match mode {
            PoolMode::Average => {
                let share = g / (h * w) as f64;
                for i in 0..h {
                    for j in 0..w {
                        out.set(ch, i, j, share);
                    }
                }
            }
            PoolMode::Max => {
                let slice = &input.values()[ch * h * w..(ch + 1) * h * w];
                let argmax = slice
                    .iter()
                    .enumerate()
                    .fold((0usize, f64::NEG_INFINITY), |acc, (i, &v)| {
                        if v > acc.1 {
                            (i, v)
                        } else {
                            acc
                        }
                    })
                    .0;
                out.set(ch, argmax / w, argmax % w, g);
            }
        }
    }
    Ok(out)
}
