//! C x H x W feature tensors.

use crate::error::{Error, Result};

/// A real-valued activation map, row-major over (channel, row, column).
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTensor {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl FeatureTensor {
    pub fn new(channels: usize, height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if channels == 0 || height == 0 || width == 0 {
            return Err(Error::Shape("tensor dimensions must be >= 1".into()));
        }
        if data.len() != channels * height * width {
            return Err(Error::Shape(format!(
                "tensor {channels}x{height}x{width} needs {} values, got {}",
                channels * height * width,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Shape("tensor values must be finite".into()));
        }
        Ok(Self { channels, height, width, data })
    }

    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        Self { channels, height, width, data: vec![0.0; channels * height * width] }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    #[inline]
    pub fn index(&self, c: usize, h: usize, w: usize) -> usize {
        (c * self.height + h) * self.width + w
    }

    #[inline]
    pub fn get(&self, c: usize, h: usize, w: usize) -> f64 {
        self.data[self.index(c, h, w)]
    }

    #[inline]
    pub fn set(&mut self, c: usize, h: usize, w: usize, value: f64) {
        let i = self.index(c, h, w);
        self.data[i] = value;
    }

    #[inline]
    pub fn add_assign(&mut self, c: usize, h: usize, w: usize, value: f64) {
        let i = self.index(c, h, w);
        self.data[i] += value;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Flatten to a raw feature vector of length C*H*W (the head input).
    pub fn flatten(&self) -> &[f64] {
        &self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_indexing() {
        let t = FeatureTensor::new(2, 2, 3, (0..12).map(f64::from).collect()).unwrap();
        assert_eq!(t.get(0, 0, 0), 0.0);
        assert_eq!(t.get(0, 1, 2), 5.0);
        assert_eq!(t.get(1, 0, 0), 6.0);
        assert_eq!(t.get(1, 1, 1), 10.0);
    }

    #[test]
    fn rejects_bad_shapes_and_nonfinite() {
        assert!(FeatureTensor::new(0, 2, 2, vec![]).is_err());
        assert!(FeatureTensor::new(1, 2, 2, vec![0.0; 3]).is_err());
        assert!(FeatureTensor::new(1, 1, 1, vec![f64::NAN]).is_err());
    }
}
