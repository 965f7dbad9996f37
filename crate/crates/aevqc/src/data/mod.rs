//! Dataset ingestion: PGM/PPM image directories and a seeded synthetic
//! generator.

mod pgm;
mod synth;

pub use pgm::load_image_dir;
pub use synth::{synth_dataset, SynthSpec};

use crate::nn::FeatureTensor;

/// One labelled image with pixel values in [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub image: FeatureTensor,
    pub label: usize,
}

/// A train/test split plus the class-name table indexed by label.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSplit {
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
    pub class_names: Vec<String>,
}

impl DatasetSplit {
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Shape (C, H, W) shared by every image in the split.
    pub fn image_shape(&self) -> Option<(usize, usize, usize)> {
        self.train.first().or_else(|| self.test.first()).map(|s| s.image.shape())
    }
}
